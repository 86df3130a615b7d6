#pragma once

/* Discrete 2D Radon transform as an assembled sparse matrix, applied
 * slice-wise along the tomography axis y; the adjoint is the exact
 * transpose. Pixel-driven construction: each pixel center (x,z) projects to
 * s = x*cos(theta) + z*sin(theta) on a centered detector with spacing dx and
 * splats linearly into the two nearest bins, scaled by dx. Contributions
 * falling off the detector are dropped.
 */

#include "pct/grids.hpp"

namespace pct {

struct SparseProjector {
  GridSpec grid;
  std::vector<double> angles;
  int n_det = 0;

  // CSR over rows r = angle*n_det + bin; columns index (ix, iz) as ix*mz + iz.
  std::vector<std::size_t> row_ptr;
  std::vector<int> col;
  std::vector<double> w;

  std::size_t rows() const { return angles.size() * (std::size_t)n_det; }
  std::size_t sino_size() const { return angles.size() * (std::size_t)grid.my * n_det; }
};

SparseProjector build_projector(const GridSpec& grid, const std::vector<double>& angles,
                                int n_det);

// -> (n_angles, my, n_det), each y-slice transformed independently
std::vector<cplx> radon_apply(const SparseProjector& p, const ObjectVolume& v);

// exact transpose: <radon_apply(v), s> = <v, radon_adjoint(s)>
ObjectVolume radon_adjoint(const SparseProjector& p, const std::vector<cplx>& sino);

/* Independent dense oracle: same splat rule evaluated pixel-by-pixel with no
   sparse storage. slice is (mx, mz), z fastest. */
std::vector<cplx> radon_oracle(const std::vector<cplx>& slice, const GridSpec& grid,
                               const std::vector<double>& angles, int n_det);

} // namespace pct
