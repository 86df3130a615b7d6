#pragma once

/* Nonlinear near-field and far-field forward operators for propagation-based
 * phase contrast tomography, their Frechet derivative / adjoint, and the
 * linear weak-object (CTF) forward model.
 *
 * Near field, per incident angle theta:
 *   I(theta) = | 1 + T_det( D_nf( pad_obj( exp(-i k R_c N) - 1 ) ) ) |^2
 * with D_nf the Fresnel multiplier on the padded grid, pad_obj symmetric
 * zero-padding of the (my x n_det) projection image and T_det truncation to
 * the (det_y x det_x) detector window. The probe is the unit plane wave,
 * whose propagated contribution is the constant 1 and therefore never
 * touches the padded grid. Far field drops the probe term and replaces the
 * Fresnel multiplier by a plain unitary FFT.
 */

#include "pct/radon.hpp"
#include "pct/transforms.hpp"

namespace pct {

struct ForwardModel {
  enum class Mode { nearfield, farfield };
  Mode mode = Mode::nearfield;
  double nf = nf_infinity; // Fresnel number, pixel-referenced; nearfield only
  SparseProjector projector;
  int pad_y = 0, pad_x = 0; // padded lateral grid
  int det_y = 0, det_x = 0; // detector window
  double k = 1.0;

  int obj_ny() const { return projector.grid.my; }
  int obj_nx() const { return projector.n_det; }
  std::size_t n_angles() const { return projector.angles.size(); }
  std::size_t data_size() const { return n_angles() * (std::size_t)det_y * det_x; }

  PadSpec pad_obj() const { return PadSpec{obj_ny(), obj_nx(), pad_y, pad_x}; }
  PadSpec pad_det() const { return PadSpec{det_y, det_x, pad_y, pad_x}; }
  void validate() const;
};

/* Builds a model with detector dims = pad dims / trunc_factor conventions:
   pad dims = pad_factor * object lateral dims; detector defaults to pad dims
   unless det dims given (> 0). */
ForwardModel make_model(ForwardModel::Mode mode, double nf, const GridSpec& grid,
                        const std::vector<double>& angles, int n_det, int pad_factor,
                        int det_y = 0, int det_x = 0);

// Normalized object transmission function O_0 = exp(-i*k*proj) - 1, pointwise.
std::vector<cplx> otf0(const std::vector<cplx>& proj, double k);

/* Caches at the linearization point N_k, per angle: the transmission
   O = exp(-i k R_c N_k) on the object window and the total propagated field
   at the detector (probe + scattered for nearfield, scattered only for
   farfield). Rebuilt whenever N changes; every CG iteration reuses it. */
struct LinearizationPoint {
  std::vector<cplx> otf;   // (n_angles, my, n_det): exp(-i k R_c N)
  std::vector<cplx> field; // (n_angles, det_y, det_x): total detector field
};

IntensityData forward(const ForwardModel& model, const ObjectVolume& volume);
LinearizationPoint linearize(const ForwardModel& model, const ObjectVolume& volume);

// Frechet derivative at the linearization point, applied to direction h.
std::vector<double> derivative_apply(const ForwardModel& model, const LinearizationPoint& lin,
                                     const ObjectVolume& h);

/* Exact adjoint of derivative_apply under the real inner products; the real
   and imaginary parts of the output are the gradient components w.r.t.
   delta and -beta. */
ObjectVolume derivative_adjoint_apply(const ForwardModel& model, const LinearizationPoint& lin,
                                      const std::vector<double>& g);

/* Linear weak-object model: per angle, on the padded grid,
   F(I-1) = -2k [ sin(pi xi'^2/N_F) F(proj delta) + cos(pi xi'^2/N_F) F(proj beta) ],
   truncated to the detector window. Nearfield only. */
IntensityData ctf_forward(const ForwardModel& model, const ObjectVolume& volume);

} // namespace pct
