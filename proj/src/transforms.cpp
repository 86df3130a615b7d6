#include "pct/transforms.hpp"

#include <cmath>

namespace pct {

ComplexField zero_pad(const ComplexField& f, const PadSpec& pad) {
  pad.validate();
  if (f.ny != pad.ny_in || f.nx != pad.nx_in)
    throw error(errc::bad_argument, "zero_pad: field dims do not match PadSpec input dims");
  ComplexField out(pad.ny_pad, pad.nx_pad);
  int oy = pad.off_y(), ox = pad.off_x();
  for (int y = 0; y < f.ny; ++y)
    for (int x = 0; x < f.nx; ++x)
      out.data[(std::size_t)(y + oy) * pad.nx_pad + (x + ox)] =
          f.data[(std::size_t)y * f.nx + x];
  return out;
}

ComplexField truncate(const ComplexField& f, const PadSpec& pad) {
  pad.validate();
  if (f.ny != pad.ny_pad || f.nx != pad.nx_pad)
    throw error(errc::bad_argument, "truncate: field dims do not match PadSpec padded dims");
  ComplexField out(pad.ny_in, pad.nx_in);
  int oy = pad.off_y(), ox = pad.off_x();
  for (int y = 0; y < out.ny; ++y)
    for (int x = 0; x < out.nx; ++x)
      out.data[(std::size_t)y * out.nx + x] =
          f.data[(std::size_t)(y + oy) * f.nx + (x + ox)];
  return out;
}

FresnelKernel FresnelKernel::make(int ny, int nx, double nf) {
  if (!(nf > 0.0)) throw error(errc::bad_argument, "FresnelKernel: nf must be > 0 or +inf");
  FresnelKernel k;
  k.nf = nf;
  k.ny = ny;
  k.nx = nx;
  k.mult.resize((std::size_t)ny * nx);
  const double pi = 3.14159265358979323846;
  for (int ty = 0; ty < ny; ++ty) {
    double xy = (double)freq_index(ty, ny) / ny;
    for (int tx = 0; tx < nx; ++tx) {
      double xx = (double)freq_index(tx, nx) / nx;
      double phase = std::isinf(nf) ? 0.0 : -pi * (xx * xx + xy * xy) / nf;
      k.mult[(std::size_t)ty * nx + tx] = cplx(std::cos(phase), std::sin(phase));
    }
  }
  return k;
}

void fresnel_apply_padded(ComplexField& padded, const FresnelKernel& kernel, bool backward) {
  if (padded.ny != kernel.ny || padded.nx != kernel.nx)
    throw error(errc::bad_argument, "fresnel_apply_padded: kernel dims mismatch");
  if (std::isinf(kernel.nf)) return; // contact plane: identity
  fft2_inplace(padded.data.data(), padded.ny, padded.nx, false);
  for (std::size_t i = 0; i < padded.data.size(); ++i)
    padded.data[i] *= backward ? std::conj(kernel.mult[i]) : kernel.mult[i];
  fft2_inplace(padded.data.data(), padded.ny, padded.nx, true);
}

ComplexField fresnel_propagate(const ComplexField& f, double nf, const PadSpec& pad,
                               bool backward) {
  if (!(nf > 0.0)) throw error(errc::bad_argument, "fresnel_propagate: nf must be > 0 or +inf");
  if (std::isinf(nf)) return f;
  ComplexField padded = zero_pad(f, pad);
  FresnelKernel kernel = FresnelKernel::make(pad.ny_pad, pad.nx_pad, nf);
  fresnel_apply_padded(padded, kernel, backward);
  return truncate(padded, pad);
}

ComplexField fraunhofer_propagate(const ComplexField& f, const PadSpec& pad, bool adjoint) {
  ComplexField padded = zero_pad(f, pad);
  fft2_inplace(padded.data.data(), padded.ny, padded.nx, adjoint);
  return truncate(padded, pad);
}

} // namespace pct
