#include "pct/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace pct {

namespace {

std::mutex plan_mutex;
std::map<std::tuple<int, int, int, int>, fftw_plan> plan_cache; // (n0,n1,n2,sign)

fftw_plan get_plan(int n0, int n1, int n2, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(n0, n1, n2, sign);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  std::vector<fftw_complex> buf((std::size_t)n0 * std::max(n1, 1) * std::max(n2, 1));
  fftw_plan p;
  if (n2 > 0)
    p = fftw_plan_dft_3d(n0, n1, n2, buf.data(), buf.data(), sign,
                         FFTW_ESTIMATE | FFTW_UNALIGNED);
  else
    p = fftw_plan_dft_2d(n0, n1, buf.data(), buf.data(), sign,
                         FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_cache[key] = p;
  return p;
}

void scale(cplx* data, std::size_t n) {
  double s = 1.0 / std::sqrt((double)n);
  for (std::size_t i = 0; i < n; ++i) data[i] *= s;
}

} // namespace

void fft2_inplace(cplx* data, int ny, int nx, bool inverse) {
  fftw_plan p = get_plan(ny, nx, 0, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
  fftw_execute_dft(p, (fftw_complex*)data, (fftw_complex*)data);
  scale(data, (std::size_t)ny * nx);
}

void fft3_inplace(cplx* data, int n0, int n1, int n2, bool inverse) {
  fftw_plan p = get_plan(n0, n1, n2, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
  fftw_execute_dft(p, (fftw_complex*)data, (fftw_complex*)data);
  scale(data, (std::size_t)n0 * n1 * n2);
}

} // namespace pct
