#pragma once

/* Object-space and data-space Gramians, and the linear constraint
 * embeddings (support, pure-phase, single-material).
 *
 * Sobolev Gramian: G_X = FFT^-1((1 + |xi_dis|^2)^s FFT(.)) with per-axis
 * frequency xi = 2*pi*j/n, j in [-n/2, n/2). Applied separately to real and
 * imaginary parts when a beta weight is present, the weight punishing
 * deviations of beta by c_{beta/delta} as strongly as deviations of delta
 * by 1.
 */

#include "pct/fft.hpp"
#include "pct/grids.hpp"

namespace pct {

struct ObjectGramian {
  double s = 0.0;             // Sobolev order; 0 = identity (L2)
  double beta_weight = 1.0;   // multiplier on the imaginary part's penalty

  bool is_identity() const { return s == 0.0 && beta_weight == 1.0; }

  ObjectVolume apply(const ObjectVolume& v) const { return apply_power(v, +1.0); }
  ObjectVolume apply_inv(const ObjectVolume& v) const { return apply_power(v, -1.0); }
  // X inner product Re<a, G_X b>
  double inner(const ObjectVolume& a, const ObjectVolume& b) const;
  double norm(const ObjectVolume& a) const;

private:
  ObjectVolume apply_power(const ObjectVolume& v, double sign) const;
};

struct DataGramian {
  enum class Kind { identity, poisson };
  Kind kind = Kind::identity;
  std::vector<double> i_err; // stored data for poisson weighting
  double i_min = 1.0;        // clamp floor, > 0
  std::vector<double> mask;  // optional multiplicative weights (0/1)

  static DataGramian identity_gramian() { return DataGramian{}; }
  static DataGramian poisson(std::vector<double> data, double i_min);

  // weight at entry i (poisson clamp times mask)
  double weight(std::size_t i) const;
  std::vector<double> apply(const std::vector<double>& d) const;
  double inner(const std::vector<double>& a, const std::vector<double>& b) const;
  double norm(const std::vector<double>& a) const;
};

struct Constraint {
  enum class Kind { none, material }; // material covers pure_phase (c = 1)
  Kind kind = Kind::none;
  cplx c = cplx(1.0, 0.0);
  std::vector<double> support; // optional 0/1 mask over the grid; empty = all

  static Constraint none_constraint() { return Constraint{}; }
  static Constraint pure_phase() { return material(cplx(1.0, 0.0)); }
  static Constraint material(cplx c) {
    Constraint k;
    k.kind = Kind::material;
    k.c = c;
    return k;
  }

  bool reduced_is_real() const { return kind == Kind::material; }

  // reduced -> object space: multiply by c (material), zero outside support
  ObjectVolume embed(const ObjectVolume& reduced) const;
  // exact adjoint: zero outside support, then Re(conj(c) * v) for material
  ObjectVolume adjoint(const ObjectVolume& v) const;
};

} // namespace pct
