#include "pct/baseline.hpp"

#include <cmath>

namespace pct {

std::vector<double> ctf_invert(const ForwardModel& model, const IntensityData& data,
                               cplx material_c, double cutoff) {
  if (model.mode != ForwardModel::Mode::nearfield)
    throw error(errc::bad_argument, "ctf_invert: nearfield data required");
  if (!(cutoff > 0.0)) throw error(errc::bad_argument, "ctf_invert: cutoff must be > 0");
  if (data.data.size() != model.data_size())
    throw error(errc::bad_argument, "ctf_invert: data shape mismatch");
  const double pi = 3.14159265358979323846;
  const int ky = model.det_y, kx = model.det_x;
  const std::size_t det = (std::size_t)ky * kx;
  const double k = model.k;

  std::vector<double> T(det);
  std::size_t t = 0;
  for (int ty = 0; ty < ky; ++ty) {
    double xy = (double)freq_index(ty, ky) / ky;
    for (int tx = 0; tx < kx; ++tx, ++t) {
      double xx = (double)freq_index(tx, kx) / kx;
      double phi = std::isinf(model.nf) ? 0.0 : pi * (xx * xx + xy * xy) / model.nf;
      T[t] = material_c.real() * std::sin(phi) - material_c.imag() * std::cos(phi);
    }
  }

  // central object window of the detector frame
  PadSpec win{model.obj_ny(), model.obj_nx(), ky, kx};
  const std::size_t lat = (std::size_t)model.obj_ny() * model.obj_nx();
  std::vector<double> proj(model.n_angles() * lat);

  for (std::size_t a = 0; a < model.n_angles(); ++a) {
    ComplexField f(ky, kx);
    for (std::size_t i = 0; i < det; ++i) f.data[i] = data.data[a * det + i] - 1.0;
    fft2_inplace(f.data.data(), ky, kx, false);
    for (std::size_t i = 0; i < det; ++i)
      f.data[i] *= T[i] / (-2.0 * k * (T[i] * T[i] + cutoff * cutoff));
    fft2_inplace(f.data.data(), ky, kx, true);
    ComplexField p = truncate(f, win);
    for (std::size_t i = 0; i < lat; ++i) proj[a * lat + i] = p.data[i].real();
  }
  return proj;
}

ObjectVolume fbp(const SparseProjector& projector, const std::vector<double>& projections) {
  const double pi = 3.14159265358979323846;
  const std::size_t n_ang = projector.angles.size();
  const int my = projector.grid.my, n_det = projector.n_det;
  const double dx = projector.grid.dx;
  if (projections.size() != projector.sino_size())
    throw error(errc::bad_argument, "fbp: projection shape mismatch");
  for (std::size_t a = 0; a < n_ang; ++a)
    if (std::abs(projector.angles[a] - (double)a * pi / (double)n_ang) > 1e-9)
      throw error(errc::bad_argument, "fbp: angles must be equispaced over [0, pi)");

  // Hann-windowed ramp from the band-limited spatial kernel: sampling the
  // ramp in frequency would zero the DC bin and lose the image mean, so the
  // response is taken as the DFT of h(j) = 1/4 (j=0), -1/(pi^2 j^2) (j odd),
  // which matches |omega| at nonzero bins and keeps a positive DC term
  std::vector<cplx> h(n_det, cplx(0.0));
  for (int m = 0; m < n_det; ++m) {
    int j = std::abs(freq_index(m, n_det)); // circular distance
    if (j == 0)
      h[m] = 0.25;
    else if (j % 2 == 1)
      h[m] = -1.0 / (pi * pi * j * j);
  }
  fft2_inplace(h.data(), 1, n_det, false);
  std::vector<double> filt(n_det);
  for (int m = 0; m < n_det; ++m) {
    int j = freq_index(m, n_det);
    double hann = 0.5 * (1.0 + std::cos(2.0 * pi * j / n_det));
    filt[m] = (2.0 * pi / dx) * std::sqrt((double)n_det) * h[m].real() * hann;
  }

  std::vector<cplx> filtered(projections.size());
  for (std::size_t ay = 0; ay < n_ang * my; ++ay) {
    std::vector<cplx> row(n_det);
    for (int j = 0; j < n_det; ++j) row[j] = projections[ay * n_det + j];
    fft2_inplace(row.data(), 1, n_det, false);
    for (int j = 0; j < n_det; ++j) row[j] *= filt[j];
    fft2_inplace(row.data(), 1, n_det, true);
    for (int j = 0; j < n_det; ++j) filtered[ay * n_det + j] = row[j];
  }

  ObjectVolume v = radon_adjoint(projector, filtered);
  double scale = 1.0 / (2.0 * (double)n_ang * dx); // (pi/n_ang) * 1/(2*pi*dx)
  for (auto& x : v.data) x *= scale;
  return v;
}

} // namespace pct
