#include "pct/simulate.hpp"

#include "pct/fft.hpp"

#include <cmath>

namespace pct {

namespace {

struct Rot {
  double m[3][3];
};

// rotation matrix from a unit quaternion
Rot quat_rot(double w, double x, double y, double z) {
  double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (n == 0.0) n = 1.0;
  w /= n; x /= n; y /= n; z /= n;
  Rot r;
  r.m[0][0] = 1 - 2 * (y * y + z * z);
  r.m[0][1] = 2 * (x * y - z * w);
  r.m[0][2] = 2 * (x * z + y * w);
  r.m[1][0] = 2 * (x * y + z * w);
  r.m[1][1] = 1 - 2 * (x * x + z * z);
  r.m[1][2] = 2 * (y * z - x * w);
  r.m[2][0] = 2 * (x * z - y * w);
  r.m[2][1] = 2 * (y * z + x * w);
  r.m[2][2] = 1 - 2 * (x * x + y * y);
  return r;
}

void rescale_to_magnitude(ObjectVolume& v, double target) {
  double cur = magnitude_norm(v);
  if (cur > 0.0) {
    double s = target / cur;
    for (auto& x : v.data) x *= s;
  }
}

} // namespace

double magnitude_norm(const ObjectVolume& v) {
  double mx = 0.0;
  for (const auto& x : v.data) mx = std::max(mx, std::abs(x));
  return v.grid.k * v.grid.thickness() * mx;
}

ObjectVolume phantom_ellipsoids(const GridSpec& grid, const PhantomSpec& spec) {
  grid.validate();
  if (spec.n_ellipsoids < 1)
    throw error(errc::bad_argument, "phantom_ellipsoids: n_ellipsoids >= 1");
  CounterRng rng{spec.seed};
  ObjectVolume v(grid);
  const double wx = grid.mx * grid.dx, wy = grid.my * grid.dx, wz = grid.mz * grid.dx;
  const double w = wx; // reference extent for semi-axes
  const double clip_r2 = 0.48 * wx * 0.48 * wx; // keep projections on the detector
  const double cx = 0.5 * (grid.mx - 1), cy = 0.5 * (grid.my - 1), cz = 0.5 * (grid.mz - 1);

  for (int e = 0; e < spec.n_ellipsoids; ++e) {
    uint64_t st = (uint64_t)(e + 1) * 64;
    double ecx = (rng.uniform(st + 0, 0) - 0.5) * 0.7 * wx;
    double ecy = grid.my > 1 ? (rng.uniform(st + 1, 0) - 0.5) * 0.7 * wy : 0.0;
    double ecz = (rng.uniform(st + 2, 0) - 0.5) * 0.7 * wz;
    double ax = (0.05 + 0.20 * rng.uniform(st + 3, 0)) * w;
    double ay = (0.05 + 0.20 * rng.uniform(st + 4, 0)) * w;
    double az = (0.05 + 0.20 * rng.uniform(st + 5, 0)) * w;
    Rot rot = quat_rot(rng.normal(st + 6, 0), rng.normal(st + 7, 0), rng.normal(st + 8, 0),
                       rng.normal(st + 9, 0));
    double dval = std::max(0.0, spec.mu + spec.sigma * spec.mu * rng.normal(st + 10, 0));
    double bval =
        spec.c_beta_delta * std::max(0.0, spec.mu + spec.sigma * spec.mu * rng.normal(st + 11, 0));
    cplx value(dval, -bval); // N = delta - i*beta

    for (int iy = 0; iy < grid.my; ++iy) {
      double py = (iy - cy) * grid.dx - ecy;
      for (int ix = 0; ix < grid.mx; ++ix) {
        double px0 = (ix - cx) * grid.dx;
        for (int iz = 0; iz < grid.mz; ++iz) {
          double pz0 = (iz - cz) * grid.dx;
          if (px0 * px0 + pz0 * pz0 > clip_r2) continue;
          double px = px0 - ecx, pz = pz0 - ecz;
          // rotate into the ellipsoid frame (axes order x,y,z)
          double ux = rot.m[0][0] * px + rot.m[1][0] * py + rot.m[2][0] * pz;
          double uy = rot.m[0][1] * px + rot.m[1][1] * py + rot.m[2][1] * pz;
          double uz = rot.m[0][2] * px + rot.m[1][2] * py + rot.m[2][2] * pz;
          double q = (ux / ax) * (ux / ax) + (uz / az) * (uz / az);
          if (grid.my > 1) q += (uy / ay) * (uy / ay);
          if (q <= 1.0) v.at(iy, ix, iz) = value; // later ellipsoids overwrite
        }
      }
    }
  }
  rescale_to_magnitude(v, spec.target_magnitude);
  return v;
}

ObjectVolume phantom_reference(const GridSpec& grid, RefShape shape, double magnitude) {
  grid.validate();
  ObjectVolume v(grid);
  const double w = grid.mx * grid.dx;
  const double cx = 0.5 * (grid.mx - 1), cy = 0.5 * (grid.my - 1), cz = 0.5 * (grid.mz - 1);
  for (int iy = 0; iy < grid.my; ++iy) {
    double py = grid.my > 1 ? (iy - cy) * grid.dx : 0.0;
    for (int ix = 0; ix < grid.mx; ++ix) {
      double px = (ix - cx) * grid.dx;
      for (int iz = 0; iz < grid.mz; ++iz) {
        double pz = (iz - cz) * grid.dx;
        double val = 0.0;
        switch (shape) {
          case RefShape::rectangle:
            if (std::abs(px) <= 0.25 * w && std::abs(py) <= 0.25 * w &&
                std::abs(pz) <= 0.25 * w)
              val = 1.0;
            break;
          case RefShape::sphere:
            if (px * px + py * py + pz * pz <= 0.3 * w * 0.3 * w) val = 1.0;
            break;
          case RefShape::bullet: {
            // hemisphere capped by a cone along +x: not point-symmetric
            double r = 0.22 * w, h = 0.38 * w;
            double q2 = py * py + pz * pz;
            if ((px <= 0.0 && px * px + q2 <= r * r) ||
                (px > 0.0 && px <= h && q2 <= r * r * (1.0 - px / h) * (1.0 - px / h)))
              val = 1.0;
            break;
          }
          case RefShape::exp_ramp:
            // exp over unit-normalized support length: far/near edge ratio = e
            if (std::abs(px) <= 0.25 * w && std::abs(py) <= 0.25 * w &&
                std::abs(pz) <= 0.25 * w)
              val = std::exp((px + 0.25 * w) / (0.5 * w));
            break;
        }
        if (val != 0.0) v.at(iy, ix, iz) = cplx(val, 0.0);
      }
    }
  }
  rescale_to_magnitude(v, magnitude);
  return v;
}

NoisyData add_gaussian_noise(const IntensityData& data, double epsilon, uint64_t seed) {
  if (!(epsilon > 0.0)) throw error(errc::bad_argument, "add_gaussian_noise: epsilon > 0");
  CounterRng rng{seed};
  NoisyData out;
  out.data = data;
  double sigma = epsilon * norm2(data.data) / std::sqrt((double)data.data.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < out.data.data.size(); ++i) {
    double e = sigma * rng.normal(0, i);
    out.data.data[i] += e;
    acc += e * e;
  }
  out.err_norm2 = std::sqrt(acc);
  return out;
}

namespace {

uint64_t poisson_draw(const CounterRng& rng, uint64_t entry, double lambda) {
  if (lambda <= 0.0) return 0;
  if (lambda < 30.0) {
    // Knuth's product-of-uniforms method
    double limit = std::exp(-lambda), prod = 1.0;
    uint64_t k = 0, c = 0;
    do {
      prod *= rng.uniform(entry * 2 + 1, c++);
      ++k;
    } while (prod > limit);
    return k - 1;
  }
  // normal approximation for large means
  double z = rng.normal(entry * 2, 0);
  double val = std::round(lambda + std::sqrt(lambda) * z);
  return val > 0.0 ? (uint64_t)val : 0;
}

} // namespace

NoisyData add_poisson_noise(const IntensityData& data, double epsilon, double i0,
                            uint64_t seed) {
  double total = 0.0;
  for (double v : data.data) {
    if (v < 0.0) throw error(errc::bad_argument, "add_poisson_noise: negative data");
    total += v;
  }
  double l2 = norm2(data.data);
  if (epsilon > 0.0) {
    // root of sqrt(sum I0*I)/(I0*||I||_2) = epsilon
    i0 = total / (epsilon * epsilon * l2 * l2);
  }
  if (!(i0 > 0.0)) throw error(errc::bad_argument, "add_poisson_noise: need epsilon or i0 > 0");

  CounterRng rng{seed};
  NoisyData out;
  out.data = data;
  out.i0 = i0;
  double acc = 0.0;
  for (std::size_t i = 0; i < data.data.size(); ++i) {
    double counts = (double)poisson_draw(rng, i, i0 * data.data[i]);
    out.data.data[i] = counts;
    double e = counts / i0 - data.data[i];
    acc += e * e;
  }
  out.err_norm2 = std::sqrt(acc); // on the counts/I0 scale
  return out;
}

std::vector<double> make_masks(const std::vector<double>& angles, int ky, int kx,
                               double theta_lo, double theta_hi, double beam_stop_radius) {
  if (!(theta_hi > theta_lo)) throw error(errc::bad_argument, "make_masks: empty kept range");
  const double two_pi = 6.28318530717958647692529;
  std::vector<double> w(angles.size() * (std::size_t)ky * kx, 1.0);
  for (std::size_t a = 0; a < angles.size(); ++a) {
    bool kept = angles[a] >= theta_lo && angles[a] < theta_hi;
    for (int ty = 0; ty < ky; ++ty) {
      double xy = two_pi * freq_index(ty, ky) / ky;
      for (int tx = 0; tx < kx; ++tx) {
        double xx = two_pi * freq_index(tx, kx) / kx;
        double val = kept ? 1.0 : 0.0;
        if (beam_stop_radius > 0.0 && std::sqrt(xx * xx + xy * xy) < beam_stop_radius)
          val = 0.0;
        w[(a * ky + ty) * (std::size_t)kx + tx] = val;
      }
    }
  }
  return w;
}

} // namespace pct
