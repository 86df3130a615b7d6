#include "pct/radon.hpp"

#include <cmath>

namespace pct {

namespace {

struct Splat {
  int bin0;        // may be -1 / n_det; out-of-range parts are dropped
  double w0, w1;   // weights for bin0 and bin0+1, already scaled by dx
};

Splat splat_for(double x, double z, double theta, double dx, int n_det) {
  double s = x * std::cos(theta) + z * std::sin(theta);
  double u = s / dx + 0.5 * (n_det - 1); // fractional bin coordinate
  double fl = std::floor(u);
  int j0 = (int)fl;
  double t = u - fl;
  return Splat{j0, (1.0 - t) * dx, t * dx};
}

} // namespace

SparseProjector build_projector(const GridSpec& grid, const std::vector<double>& angles,
                                int n_det) {
  grid.validate();
  if (n_det < 1 || angles.empty())
    throw error(errc::bad_argument, "build_projector: need n_det >= 1 and angles");

  SparseProjector p;
  p.grid = grid;
  p.angles = angles;
  p.n_det = n_det;

  const int mx = grid.mx, mz = grid.mz;
  const double dx = grid.dx;
  const double cx = 0.5 * (mx - 1), cz = 0.5 * (mz - 1);
  std::size_t nrows = p.rows();

  // counting pass
  std::vector<std::size_t> count(nrows, 0);
  for (std::size_t a = 0; a < angles.size(); ++a) {
    for (int ix = 0; ix < mx; ++ix)
      for (int iz = 0; iz < mz; ++iz) {
        Splat sp = splat_for((ix - cx) * dx, (iz - cz) * dx, angles[a], dx, n_det);
        if (sp.bin0 >= 0 && sp.bin0 < n_det && sp.w0 != 0.0) ++count[a * n_det + sp.bin0];
        if (sp.bin0 + 1 >= 0 && sp.bin0 + 1 < n_det && sp.w1 != 0.0)
          ++count[a * n_det + sp.bin0 + 1];
      }
  }
  p.row_ptr.assign(nrows + 1, 0);
  for (std::size_t r = 0; r < nrows; ++r) p.row_ptr[r + 1] = p.row_ptr[r] + count[r];
  p.col.resize(p.row_ptr[nrows]);
  p.w.resize(p.row_ptr[nrows]);

  // fill pass (deterministic pixel order within each row)
  std::vector<std::size_t> next(p.row_ptr.begin(), p.row_ptr.end() - 1);
  for (std::size_t a = 0; a < angles.size(); ++a) {
    for (int ix = 0; ix < mx; ++ix)
      for (int iz = 0; iz < mz; ++iz) {
        Splat sp = splat_for((ix - cx) * dx, (iz - cz) * dx, angles[a], dx, n_det);
        int colidx = ix * mz + iz;
        if (sp.bin0 >= 0 && sp.bin0 < n_det && sp.w0 != 0.0) {
          std::size_t k = next[a * n_det + sp.bin0]++;
          p.col[k] = colidx;
          p.w[k] = sp.w0;
        }
        if (sp.bin0 + 1 >= 0 && sp.bin0 + 1 < n_det && sp.w1 != 0.0) {
          std::size_t k = next[a * n_det + sp.bin0 + 1]++;
          p.col[k] = colidx;
          p.w[k] = sp.w1;
        }
      }
  }
  return p;
}

std::vector<cplx> radon_apply(const SparseProjector& p, const ObjectVolume& v) {
  if (v.grid.mx != p.grid.mx || v.grid.my != p.grid.my || v.grid.mz != p.grid.mz)
    throw error(errc::bad_argument, "radon_apply: volume grid mismatch");
  const int my = p.grid.my, n_det = p.n_det;
  const std::size_t n_ang = p.angles.size();
  const std::size_t slice_sz = (std::size_t)p.grid.mx * p.grid.mz;
  std::vector<cplx> sino(p.sino_size(), cplx(0.0));
  for (int y = 0; y < my; ++y) {
    const cplx* slice = v.data.data() + (std::size_t)y * slice_sz;
    for (std::size_t a = 0; a < n_ang; ++a) {
      for (int j = 0; j < n_det; ++j) {
        std::size_t r = a * n_det + j;
        cplx acc(0.0);
        for (std::size_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k)
          acc += p.w[k] * slice[p.col[k]];
        sino[(a * my + y) * (std::size_t)n_det + j] = acc;
      }
    }
  }
  return sino;
}

ObjectVolume radon_adjoint(const SparseProjector& p, const std::vector<cplx>& sino) {
  if (sino.size() != p.sino_size())
    throw error(errc::bad_argument, "radon_adjoint: sinogram shape mismatch");
  const int my = p.grid.my, n_det = p.n_det;
  const std::size_t n_ang = p.angles.size();
  const std::size_t slice_sz = (std::size_t)p.grid.mx * p.grid.mz;
  ObjectVolume v(p.grid);
  for (int y = 0; y < my; ++y) {
    cplx* slice = v.data.data() + (std::size_t)y * slice_sz;
    for (std::size_t a = 0; a < n_ang; ++a) {
      for (int j = 0; j < n_det; ++j) {
        std::size_t r = a * n_det + j;
        cplx s = sino[(a * my + y) * (std::size_t)n_det + j];
        for (std::size_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k)
          slice[p.col[k]] += p.w[k] * s;
      }
    }
  }
  return v;
}

std::vector<cplx> radon_oracle(const std::vector<cplx>& slice, const GridSpec& grid,
                               const std::vector<double>& angles, int n_det) {
  const int mx = grid.mx, mz = grid.mz;
  const double dx = grid.dx;
  const double cx = 0.5 * (mx - 1), cz = 0.5 * (mz - 1);
  std::vector<cplx> sino(angles.size() * (std::size_t)n_det, cplx(0.0));
  for (std::size_t a = 0; a < angles.size(); ++a)
    for (int ix = 0; ix < mx; ++ix)
      for (int iz = 0; iz < mz; ++iz) {
        Splat sp = splat_for((ix - cx) * dx, (iz - cz) * dx, angles[a], dx, n_det);
        cplx v = slice[(std::size_t)ix * mz + iz];
        if (sp.bin0 >= 0 && sp.bin0 < n_det) sino[a * n_det + sp.bin0] += sp.w0 * v;
        if (sp.bin0 + 1 >= 0 && sp.bin0 + 1 < n_det) sino[a * n_det + sp.bin0 + 1] += sp.w1 * v;
      }
  return sino;
}

} // namespace pct
