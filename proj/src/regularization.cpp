#include "pct/regularization.hpp"

#include <cmath>

namespace pct {

namespace {

// (1 + |xi_dis|^2)^(sign*s) multiplier over the (my, mx, mz) FFT grid
std::vector<double> sobolev_multiplier(const GridSpec& g, double s, double sign) {
  const double two_pi = 6.28318530717958647692529;
  std::vector<double> m(g.voxels());
  std::size_t i = 0;
  for (int iy = 0; iy < g.my; ++iy) {
    double xy = two_pi * freq_index(iy, g.my) / g.my;
    for (int ix = 0; ix < g.mx; ++ix) {
      double xx = two_pi * freq_index(ix, g.mx) / g.mx;
      for (int iz = 0; iz < g.mz; ++iz, ++i) {
        double xz = two_pi * freq_index(iz, g.mz) / g.mz;
        m[i] = std::pow(1.0 + xx * xx + xy * xy + xz * xz, sign * s);
      }
    }
  }
  return m;
}

// apply the Sobolev multiplier to a complex volume via the unitary 3D FFT
void sobolev_apply(std::vector<cplx>& data, const GridSpec& g, double s, double sign) {
  fft3_inplace(data.data(), g.my, g.mx, g.mz, false);
  std::vector<double> m = sobolev_multiplier(g, s, sign);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= m[i];
  fft3_inplace(data.data(), g.my, g.mx, g.mz, true);
}

} // namespace

ObjectVolume ObjectGramian::apply_power(const ObjectVolume& v, double sign) const {
  ObjectVolume out = v;
  if (beta_weight == 1.0) {
    if (s != 0.0) sobolev_apply(out.data, v.grid, s, sign);
    return out;
  }
  // separate real/imaginary channels so the beta weight stays self-adjoint
  std::size_t n = v.data.size();
  std::vector<cplx> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = cplx(v.data[i].real(), 0.0);
    im[i] = cplx(v.data[i].imag(), 0.0);
  }
  if (s != 0.0) {
    sobolev_apply(re, v.grid, s, sign);
    sobolev_apply(im, v.grid, s, sign);
  }
  double bw = (sign > 0) ? beta_weight : 1.0 / beta_weight;
  for (std::size_t i = 0; i < n; ++i)
    out.data[i] = cplx(re[i].real(), bw * im[i].real());
  return out;
}

double ObjectGramian::inner(const ObjectVolume& a, const ObjectVolume& b) const {
  if (is_identity()) return inner_product(a.data, b.data);
  return inner_product(a.data, apply(b).data);
}

double ObjectGramian::norm(const ObjectVolume& a) const { return std::sqrt(inner(a, a)); }

DataGramian DataGramian::poisson(std::vector<double> data, double i_min) {
  if (!(i_min > 0.0)) throw error(errc::bad_argument, "DataGramian: i_min must be > 0");
  DataGramian g;
  g.kind = Kind::poisson;
  g.i_err = std::move(data);
  g.i_min = i_min;
  return g;
}

double DataGramian::weight(std::size_t i) const {
  double w = 1.0;
  if (kind == Kind::poisson) w = 1.0 / std::max(i_err[i], i_min);
  if (!mask.empty()) w *= mask[i];
  return w;
}

std::vector<double> DataGramian::apply(const std::vector<double>& d) const {
  if (kind == Kind::poisson && d.size() != i_err.size())
    throw error(errc::bad_argument, "DataGramian: shape mismatch");
  if (!mask.empty() && d.size() != mask.size())
    throw error(errc::bad_argument, "DataGramian: mask shape mismatch");
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = weight(i) * d[i];
  return out;
}

double DataGramian::inner(const std::vector<double>& a, const std::vector<double>& b) const {
  if (a.size() != b.size()) throw error(errc::bad_argument, "DataGramian: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * weight(i) * b[i];
  return acc;
}

double DataGramian::norm(const std::vector<double>& a) const { return std::sqrt(inner(a, a)); }

ObjectVolume Constraint::embed(const ObjectVolume& reduced) const {
  ObjectVolume out = reduced;
  if (kind == Kind::material)
    for (auto& v : out.data) v = c * v.real();
  if (!support.empty()) {
    if (support.size() != out.data.size())
      throw error(errc::bad_argument, "Constraint: support mask shape mismatch");
    for (std::size_t i = 0; i < out.data.size(); ++i)
      if (support[i] == 0.0) out.data[i] = cplx(0.0);
  }
  return out;
}

ObjectVolume Constraint::adjoint(const ObjectVolume& v) const {
  ObjectVolume out = v;
  if (!support.empty()) {
    if (support.size() != out.data.size())
      throw error(errc::bad_argument, "Constraint: support mask shape mismatch");
    for (std::size_t i = 0; i < out.data.size(); ++i)
      if (support[i] == 0.0) out.data[i] = cplx(0.0);
  }
  if (kind == Kind::material)
    for (auto& x : out.data)
      x = cplx(c.real() * x.real() + c.imag() * x.imag(), 0.0); // Re(conj(c)*x)
  return out;
}

} // namespace pct
