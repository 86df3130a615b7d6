#pragma once

/* Shared basics: error type, complex alias, counter-based RNG.
 *
 * The RNG is counter-based (stateless hash of seed + stream + counter) so
 * that phantom generation and noise draws are reproducible regardless of
 * evaluation order or thread count.
 */

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pct {

using cplx = std::complex<double>;

enum class errc {
  bad_magic,
  truncated_file,
  unknown_dtype,
  bad_header,
  io_failure,
  bad_argument,
  numeric_failure,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

inline uint64_t mix64(uint64_t z) {
  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/* Stateless generator: every draw is a pure function of (seed, stream, counter). */
struct CounterRng {
  uint64_t seed = 0;

  uint64_t bits(uint64_t stream, uint64_t counter) const {
    return mix64(mix64(mix64(seed) ^ mix64(stream * 0x9e3779b97f4a7c15ull + 1)) ^ counter);
  }
  // uniform in [0,1)
  double uniform(uint64_t stream, uint64_t counter) const {
    return (double)(bits(stream, counter) >> 11) * 0x1.0p-53;
  }
  // standard normal via Box-Muller (uses counters 2c, 2c+1 of the stream)
  double normal(uint64_t stream, uint64_t counter) const {
    double u1 = uniform(stream, 2 * counter);
    double u2 = uniform(stream, 2 * counter + 1);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }
};

} // namespace pct
