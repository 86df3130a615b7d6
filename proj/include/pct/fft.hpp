#pragma once

/* Unitary FFT wrappers (1/sqrt(n) both directions), backed by FFTW3.
 * Plans are cached per shape/direction and shared; execution uses the
 * new-array interface so buffers may differ between calls.
 */

#include "pct/common.hpp"

namespace pct {

// In-place unitary 2D FFT of a (ny, nx) row-major complex array.
void fft2_inplace(cplx* data, int ny, int nx, bool inverse);

// In-place unitary 3D FFT of a (n0, n1, n2) row-major complex array.
void fft3_inplace(cplx* data, int n0, int n1, int n2, bool inverse);

// Signed FFT-order frequency index: t -> j with j in [-n/2, n/2).
inline int freq_index(int t, int n) { return t < (n + 1) / 2 ? t : t - n; }

} // namespace pct
