#pragma once

/* Direct CTF inversion with Tikhonov-clamped division, and a minimal
 * Hann-windowed filtered backprojection — the non-simultaneous comparison
 * path (per-angle phase retrieval, then tomographic inversion).
 */

#include "pct/forward.hpp"

namespace pct {

/* Per angle, in Fourier space on the detector grid, solves
 *   F(I-1) = -2k * T(xi) * F(p),   T = Re(c)*sin(phi) - Im(c)*cos(phi),
 * phi = pi*xi'^2/N_F, for the single real reduced projection p (the
 * projection of the reduced material variable; N = c*p). Estimator
 *   F(p) = T * F(I-1) / (-2k * (T^2 + cutoff^2)).
 * Returns real projections shaped (n_angles, my, n_det), the central object
 * window of the detector frame. */
std::vector<double> ctf_invert(const ForwardModel& model, const IntensityData& data,
                               cplx material_c, double cutoff);

/* Hann-windowed ramp-filter FBP; projections shaped (n_angles, my, n_det),
   angles must be equispaced over [0, pi). */
ObjectVolume fbp(const SparseProjector& projector, const std::vector<double>& projections);

} // namespace pct
