#pragma once

/* Symmetric zero-padding / truncation (a mutually adjoint pair) and the
 * discrete Fresnel and Fraunhofer propagators.
 *
 * Frequency convention: the dimensionless per-axis frequency is xi' = j/n
 * for j in [-n/2, n/2) in FFT order, and the Fresnel multiplier is
 * exp(-i*pi*(xi'_x^2 + xi'_y^2)/N_F) with the Fresnel number referenced to
 * one pixel. N_F = +inf is an identity sentinel (contact plane).
 */

#include "pct/fft.hpp"
#include "pct/grids.hpp"

#include <limits>

namespace pct {

struct PadSpec {
  int ny_in = 0, nx_in = 0;
  int ny_pad = 0, nx_pad = 0;

  int off_y() const { return (ny_pad - ny_in + 1) / 2; } // ceil((pad-in)/2)
  int off_x() const { return (nx_pad - nx_in + 1) / 2; }
  void validate() const {
    if (ny_in < 1 || nx_in < 1 || ny_pad < ny_in || nx_pad < nx_in)
      throw error(errc::bad_argument, "PadSpec: padded dims must be >= input dims >= 1");
  }
};

constexpr double nf_infinity = std::numeric_limits<double>::infinity();

ComplexField zero_pad(const ComplexField& f, const PadSpec& pad);
ComplexField truncate(const ComplexField& f, const PadSpec& pad);

struct FresnelKernel {
  double nf = nf_infinity;
  int ny = 0, nx = 0;
  std::vector<cplx> mult; // unit-modulus multiplier over the FFT-order grid

  static FresnelKernel make(int ny, int nx, double nf);
};

/* truncate(ifft2(mult .* fft2(pad(f)))); backward=true uses the conjugate
   multiplier (back-propagation, the adjoint/inverse propagator). */
ComplexField fresnel_propagate(const ComplexField& f, double nf, const PadSpec& pad,
                               bool backward = false);

/* truncate(fft2(pad(f))); adjoint=true is truncate(ifft2(pad(f))), the exact
   adjoint (and inverse on the padded domain) under unitary normalization. */
ComplexField fraunhofer_propagate(const ComplexField& f, const PadSpec& pad,
                                  bool adjoint = false);

/* In-place propagation on an already padded field; used by the forward model
   where the pad window (object) and truncation window (detector) differ. */
void fresnel_apply_padded(ComplexField& padded, const FresnelKernel& kernel, bool backward);

} // namespace pct
