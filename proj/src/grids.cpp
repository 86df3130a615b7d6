#include "pct/grids.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace pct {

double inner_product(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw error(errc::bad_argument, "inner_product: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag(); // Re(conj(a)*b)
  return acc;
}

double inner_product(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw error(errc::bad_argument, "inner_product: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const std::vector<cplx>& a) { return std::sqrt(inner_product(a, a)); }
double norm2(const std::vector<double>& a) { return std::sqrt(inner_product(a, a)); }

namespace {

void put_u64le(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (unsigned char)((v >> (8 * i)) & 0xff);
  os.write((const char*)b, 8);
}

void put_f64le(std::ostream& os, double v) {
  uint64_t u;
  std::memcpy(&u, &v, 8);
  put_u64le(os, u);
}

uint64_t get_u64le(std::istream& is) {
  unsigned char b[8];
  is.read((char*)b, 8);
  if (!is) throw error(errc::truncated_file, "PCT1: truncated header/payload");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= (uint64_t)b[i] << (8 * i);
  return v;
}

double get_f64le(std::istream& is) {
  uint64_t u = get_u64le(is);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

} // namespace

void write_array(const std::string& path, const NdArray& arr) {
  if (arr.dims.empty() || arr.dims.size() > 4)
    throw error(errc::bad_argument, "PCT1: ndim must be in 1..4");
  std::size_t n = arr.count();
  if (arr.dtype == Dtype::real64 && arr.f64.size() != n)
    throw error(errc::bad_argument, "PCT1: real payload size mismatch");
  if (arr.dtype == Dtype::complex128 && arr.c128.size() != n)
    throw error(errc::bad_argument, "PCT1: complex payload size mismatch");

  std::ofstream os(path, std::ios::binary);
  if (!os) throw error(errc::io_failure, "PCT1: cannot open for writing: " + path);
  os.write("PCT1", 4);
  os.put((char)(uint8_t)arr.dtype);
  os.put((char)(uint8_t)arr.dims.size());
  for (uint64_t d : arr.dims) put_u64le(os, d);
  if (arr.dtype == Dtype::real64) {
    for (double v : arr.f64) put_f64le(os, v);
  } else {
    for (cplx v : arr.c128) {
      put_f64le(os, v.real());
      put_f64le(os, v.imag());
    }
  }
  if (!os) throw error(errc::io_failure, "PCT1: write failed: " + path);
}

NdArray read_array(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw error(errc::io_failure, "PCT1: cannot open for reading: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "PCT1", 4) != 0)
    throw error(errc::bad_magic, "PCT1: bad magic in " + path);
  int dt = is.get();
  int nd = is.get();
  if (!is) throw error(errc::truncated_file, "PCT1: truncated header");
  if (dt != 0 && dt != 1) throw error(errc::unknown_dtype, "PCT1: unknown dtype code");
  if (nd < 1 || nd > 4) throw error(errc::bad_header, "PCT1: ndim out of range");

  NdArray arr;
  arr.dtype = (Dtype)dt;
  arr.dims.resize(nd);
  for (int i = 0; i < nd; ++i) arr.dims[i] = get_u64le(is);
  std::size_t n = arr.count();
  if (arr.dtype == Dtype::real64) {
    arr.f64.resize(n);
    for (std::size_t i = 0; i < n; ++i) arr.f64[i] = get_f64le(is);
  } else {
    arr.c128.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double re = get_f64le(is);
      double im = get_f64le(is);
      arr.c128[i] = cplx(re, im);
    }
  }
  return arr;
}

void emit_grayscale(const std::string& path, int rows, int cols, const double* slice) {
  std::size_t n = (std::size_t)rows * cols;
  double lo = slice[0], hi = slice[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(slice[i])) throw error(errc::bad_argument, "emit_grayscale: NaN in slice");
    lo = std::min(lo, slice[i]);
    hi = std::max(hi, slice[i]);
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw error(errc::io_failure, "emit_grayscale: cannot open " + path);
  os << "P5\n" << cols << " " << rows << "\n255\n";
  for (std::size_t i = 0; i < n; ++i) {
    int px = (hi > lo) ? (int)std::lround(255.0 * (slice[i] - lo) / (hi - lo)) : 128;
    os.put((char)(unsigned char)px);
  }
  if (!os) throw error(errc::io_failure, "emit_grayscale: write failed " + path);
}

} // namespace pct
