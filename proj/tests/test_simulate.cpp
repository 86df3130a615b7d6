#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pct/simulate.hpp"

#include <cmath>

using namespace pct;

namespace {
const double pi = 3.14159265358979323846;
}

TEST_CASE("ellipsoid phantom determinism and magnitude") {
  GridSpec g{32, 1, 32};
  PhantomSpec spec;
  spec.seed = 42;
  ObjectVolume a = phantom_ellipsoids(g, spec);
  ObjectVolume b = phantom_ellipsoids(g, spec);
  CHECK(a.data == b.data); // bit-identical

  spec.seed = 43;
  ObjectVolume c = phantom_ellipsoids(g, spec);
  CHECK(a.data != c.data);

  CHECK(magnitude_norm(a) == doctest::Approx(pi).epsilon(1e-12));
  spec.target_magnitude = 0.25;
  CHECK(magnitude_norm(phantom_ellipsoids(g, spec)) == doctest::Approx(0.25).epsilon(1e-12));

  spec.n_ellipsoids = 0;
  CHECK_THROWS_AS(phantom_ellipsoids(g, spec), error);
}

TEST_CASE("magnitude norm scales with k and thickness") {
  GridSpec g1{8, 1, 8, 1.0, 1.0};
  GridSpec g2{8, 1, 8, 0.5, 2.0}; // L halves, k doubles: same product
  ObjectVolume v1(g1), v2(g2);
  v1.at(0, 3, 3) = cplx(0.3, -0.4); // |N| = 0.5
  v2.at(0, 3, 3) = cplx(0.3, -0.4);
  CHECK(magnitude_norm(v1) == doctest::Approx(8.0 * 0.5));
  CHECK(magnitude_norm(v2) == doctest::Approx(2.0 * 4.0 * 0.5));
}

TEST_CASE("ellipsoid phantom support and sign structure") {
  GridSpec g{32, 1, 32};
  PhantomSpec spec;
  spec.seed = 7;
  spec.c_beta_delta = 0.05;
  ObjectVolume v = phantom_ellipsoids(g, spec);
  double c = 15.5, clip = 0.48 * 32;
  bool any = false;
  for (int ix = 0; ix < 32; ++ix)
    for (int iz = 0; iz < 32; ++iz) {
      cplx x = v.at(0, ix, iz);
      if ((ix - c) * (ix - c) + (iz - c) * (iz - c) > clip * clip)
        CHECK(x == cplx(0.0)); // clipped outside the detector footprint
      CHECK(x.real() >= 0.0);  // delta >= 0
      CHECK(x.imag() <= 0.0);  // N = delta - i*beta, beta >= 0
      if (x != cplx(0.0)) any = true;
    }
  CHECK(any);

  spec.c_beta_delta = 0.0;
  ObjectVolume pure = phantom_ellipsoids(g, spec);
  for (auto x : pure.data) CHECK(x.imag() == 0.0);
}

TEST_CASE("reference shapes") {
  GridSpec g{16, 16, 16};

  // rectangle: |p| <= w/4 per axis keeps 8 of 16 samples per axis
  ObjectVolume r = phantom_reference(g, RefShape::rectangle, 1.0);
  int nz = 0;
  for (auto x : r.data)
    if (x != cplx(0.0)) ++nz;
  CHECK(nz == 8 * 8 * 8);
  CHECK(magnitude_norm(r) == doctest::Approx(1.0).epsilon(1e-12));

  // sphere of radius 0.3*w: inside/outside witnesses and x<->z symmetry
  ObjectVolume s = phantom_reference(g, RefShape::sphere, 1.0);
  CHECK(s.at(8, 8, 8) != cplx(0.0));
  CHECK(s.at(0, 0, 0) == cplx(0.0));
  int sphere_count = 0;
  for (auto x : s.data)
    if (x != cplx(0.0)) ++sphere_count;
  // volume check: (4/3)*pi*4.8^3 ~ 463, grid quantization within 10%
  CHECK(std::abs(sphere_count - 4.0 / 3.0 * pi * 4.8 * 4.8 * 4.8) <
        0.1 * 4.0 / 3.0 * pi * 4.8 * 4.8 * 4.8);
  for (int ix = 0; ix < 16; ++ix)
    for (int iz = 0; iz < 16; ++iz) CHECK(s.at(8, ix, iz) == s.at(8, iz, ix));

  // bullet: hemisphere + cone, deliberately asymmetric along x
  ObjectVolume bu = phantom_reference(g, RefShape::bullet, 1.0);
  bool asym = false;
  for (int ix = 0; ix < 16; ++ix)
    if (bu.at(8, ix, 8) != bu.at(8, 15 - ix, 8)) asym = true;
  CHECK(asym);

  // exponential ramp: one-pixel steps multiply by exp(dx/(w/2))
  ObjectVolume e = phantom_reference(g, RefShape::exp_ramp, 1.0);
  double step = std::exp(1.0 / 8.0);
  for (int ix = 5; ix < 11; ++ix) {
    double v0 = e.at(8, ix, 8).real(), v1 = e.at(8, ix + 1, 8).real();
    REQUIRE(v0 > 0.0);
    CHECK(v1 / v0 == doctest::Approx(step).epsilon(1e-12));
  }
  // across the full support (8 samples, 7 steps): near/far ratio e^(7/8)
  CHECK(e.at(8, 11, 8).real() / e.at(8, 4, 8).real() ==
        doctest::Approx(std::exp(7.0 / 8.0)).epsilon(1e-12));
}

TEST_CASE("gaussian noise level concentrates at epsilon") {
  IntensityData clean;
  clean.ky = 1;
  clean.kx = 1;
  clean.data.assign(100000, 1.0);
  double eps = 0.02;
  NoisyData noisy = add_gaussian_noise(clean, eps, 5);
  double rel = noisy.err_norm2 / norm2(clean.data);
  CHECK(rel >= 0.9 * eps);
  CHECK(rel <= 1.1 * eps);

  // realized error norm is consistent with the perturbed data
  double acc = 0.0;
  for (std::size_t i = 0; i < clean.data.size(); ++i) {
    double d = noisy.data.data[i] - clean.data[i];
    acc += d * d;
  }
  CHECK(std::sqrt(acc) == doctest::Approx(noisy.err_norm2).epsilon(1e-12));

  NoisyData again = add_gaussian_noise(clean, eps, 5);
  CHECK(again.data.data == noisy.data.data); // deterministic in the seed

  CHECK_THROWS_AS(add_gaussian_noise(clean, 0.0, 1), error);
}

TEST_CASE("poisson noise: counts, photon budget, noise level") {
  CounterRng rng{9};
  IntensityData clean;
  clean.ky = 1;
  clean.kx = 1;
  clean.data.resize(50000);
  for (std::size_t i = 0; i < clean.data.size(); ++i)
    clean.data[i] = 1.0 + 0.5 * rng.uniform(0, i);

  for (double eps : {0.03, 0.10}) {
    NoisyData noisy = add_poisson_noise(clean, eps, 0.0, 11);
    // counts are nonnegative integers on the raw scale
    for (double cts : noisy.data.data) {
      CHECK(cts >= 0.0);
      CHECK(cts == std::floor(cts));
    }
    // closed-form photon budget
    double total = 0.0;
    for (double v : clean.data) total += v;
    double l2 = norm2(clean.data);
    CHECK(noisy.i0 == doctest::Approx(total / (eps * eps * l2 * l2)).epsilon(1e-12));
    // realized relative error (counts/I0 vs clean) near the requested level
    CHECK(noisy.err_norm2 / l2 >= 0.9 * eps);
    CHECK(noisy.err_norm2 / l2 <= 1.1 * eps);
  }

  // explicit i0 path with small means exercises the exact sampler
  IntensityData tiny;
  tiny.ky = 1;
  tiny.kx = 1;
  tiny.data.assign(20000, 2.0);
  NoisyData small = add_poisson_noise(tiny, 0.0, 1.5, 13);
  CHECK(small.i0 == 1.5);
  double mean = 0.0;
  for (double cts : small.data.data) mean += cts;
  mean /= small.data.data.size();
  CHECK(mean == doctest::Approx(3.0).epsilon(0.05)); // lambda = i0 * I = 3

  CHECK_THROWS_AS(add_poisson_noise(tiny, 0.0, 0.0, 1), error);
  IntensityData neg;
  neg.data = {-1.0};
  CHECK_THROWS_AS(add_poisson_noise(neg, 0.1, 0.0, 1), error);
}

TEST_CASE("angle wedge and beam stop masks") {
  // 256 equispaced angles over [0, pi), keep [0, 160 deg): 228 kept
  std::vector<double> angles(256);
  for (int i = 0; i < 256; ++i) angles[i] = i * pi / 256;
  auto w = make_masks(angles, 1, 4, 0.0, 160.0 * pi / 180.0);
  int kept = 0;
  for (int a = 0; a < 256; ++a)
    if (w[(std::size_t)a * 4] == 1.0) ++kept;
  CHECK(kept == 228);
  // excluded rows are zero across the whole detector
  for (int a = 228; a < 256; ++a)
    for (int j = 0; j < 4; ++j) CHECK(w[(std::size_t)a * 4 + j] == 0.0);

  // beam stop: |xi| < 1 with xi = 2*pi*j/8 masks the 5-pixel center cross
  auto bs = make_masks({0.0}, 8, 8, 0.0, pi, 1.0);
  int masked = 0;
  for (double v : bs) masked += (v == 0.0);
  CHECK(masked == 5);
  CHECK(bs[0] == 0.0);                    // (0,0)
  CHECK(bs[1] == 0.0);                    // (0,1): |xi| = pi/4 < 1
  CHECK(bs[(std::size_t)1 * 8 + 1] == 1.0); // (1,1): |xi| = pi*sqrt(2)/4 > 1

  CHECK_THROWS_AS(make_masks({0.0}, 1, 1, 1.0, 1.0), error);
}
