#pragma once

/* Core array types, physical metadata, binary I/O and grayscale emission.
 *
 * Axis conventions: y is the tomography axis, (x,z) the rotation plane.
 * ObjectVolume stores N = delta - i*beta on a (my, mx, mz) grid, z fastest.
 * IntensityData stores per-angle detector frames (n_angles, ky, kx), with
 * frame rows indexed by detector-y and columns by detector-x.
 */

#include "pct/common.hpp"

#include <cstddef>
#include <vector>

namespace pct {

struct GridSpec {
  int mx = 1, my = 1, mz = 1; // voxel counts
  double dx = 1.0;            // voxel edge length
  double k = 1.0;             // wavenumber

  double thickness() const { return mx * dx; } // L = mx*dx
  std::size_t voxels() const { return (std::size_t)mx * my * mz; }
  void validate() const {
    if (mx < 1 || my < 1 || mz < 1 || dx <= 0.0 || k <= 0.0)
      throw error(errc::bad_argument, "GridSpec: counts >= 1, dx > 0, k > 0 required");
  }
};

struct ObjectVolume {
  GridSpec grid;
  std::vector<cplx> data; // (my, mx, mz), z fastest

  ObjectVolume() = default;
  explicit ObjectVolume(const GridSpec& g) : grid(g), data(g.voxels(), cplx(0.0)) {}

  std::size_t idx(int iy, int ix, int iz) const {
    return ((std::size_t)iy * grid.mx + ix) * grid.mz + iz;
  }
  cplx& at(int iy, int ix, int iz) { return data[idx(iy, ix, iz)]; }
  const cplx& at(int iy, int ix, int iz) const { return data[idx(iy, ix, iz)]; }
};

struct IntensityData {
  std::vector<double> angles; // radians, strictly increasing in [0, 2*pi)
  int ky = 0, kx = 0;         // detector dims
  std::vector<double> data;    // (n_angles, ky, kx)
  std::vector<double> weights; // optional, same shape; empty = all fitted

  std::size_t frame_size() const { return (std::size_t)ky * kx; }
  std::size_t size() const { return angles.size() * frame_size(); }
};

struct ComplexField {
  int ny = 0, nx = 0;
  std::vector<cplx> data; // (ny, nx), x fastest

  ComplexField() = default;
  ComplexField(int ny_, int nx_) : ny(ny_), nx(nx_), data((std::size_t)ny_ * nx_, cplx(0.0)) {}
};

/* Real-part inner products Re(sum conj(a_i) b_i); the induced norms are the
   plain Euclidean norms used throughout. */
double inner_product(const std::vector<cplx>& a, const std::vector<cplx>& b);
double inner_product(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<cplx>& a);
double norm2(const std::vector<double>& a);

/* "PCT1" container: magic "PCT1", u8 dtype (0 = real64, 1 = complex128),
   u8 ndim (<= 4), ndim x u64 little-endian dims, then the payload
   little-endian row-major (last axis fastest), complex as (re, im). */
enum class Dtype : uint8_t { real64 = 0, complex128 = 1 };

struct NdArray {
  Dtype dtype = Dtype::real64;
  std::vector<uint64_t> dims;
  std::vector<double> f64;
  std::vector<cplx> c128;

  std::size_t count() const {
    std::size_t n = 1;
    for (uint64_t d : dims) n *= (std::size_t)d;
    return dims.empty() ? 0 : n;
  }
};

void write_array(const std::string& path, const NdArray& arr);
NdArray read_array(const std::string& path);

/* Binary portable graymap (P5, maxval 255), linear min-max normalization;
   a constant slice maps to 128 everywhere. */
void emit_grayscale(const std::string& path, int rows, int cols, const double* slice);

} // namespace pct
