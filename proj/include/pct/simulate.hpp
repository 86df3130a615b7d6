#pragma once

/* Phantom generation (random nested ellipsoids, geometric reference
 * shapes), magnitude scaling, noise injection and data masks.
 *
 * All stochastic operations are pure functions of (inputs, seed) via the
 * counter-based generator, so results are order- and thread-independent.
 *
 * Geometry conventions (the source material gives no distributions, these
 * are artifact conventions): ellipsoid centers uniform in the central 70%
 * cube, semi-axes uniform in [5%, 25%] of the grid width, uniform random
 * rotations; voxels outside a cylinder of radius 0.48*width in the rotation
 * plane are clipped so every projection stays on an n_det = mx detector.
 */

#include "pct/grids.hpp"

namespace pct {

struct PhantomSpec {
  uint64_t seed = 0;
  int n_ellipsoids = 8;
  double mu = 1.0;
  double sigma = 0.3;          // values drawn Normal(mu, sigma*mu), negatives clipped
  double c_beta_delta = 0.0;   // beta values = c_beta_delta * Normal(mu, sigma*mu)
  double target_magnitude = 3.141592653589793; // k*L*max|N| after rescale
};

enum class RefShape { rectangle, sphere, bullet, exp_ramp };

ObjectVolume phantom_ellipsoids(const GridSpec& grid, const PhantomSpec& spec);
ObjectVolume phantom_reference(const GridSpec& grid, RefShape shape, double magnitude);

// scaled maximum norm ||N|| = k*L*max|N|, L = mx*dx
double magnitude_norm(const ObjectVolume& v);

struct NoisyData {
  IntensityData data;
  double err_norm2 = 0.0; // realized ||I_err - I||_2
  double i0 = 0.0;        // photon scale (poisson only)
};

/* Additive white noise with sigma = epsilon*||I||_2/sqrt(n); records the
   realized error norm for the discrepancy rule. */
NoisyData add_gaussian_noise(const IntensityData& data, double epsilon, uint64_t seed);

/* Counts ~ Poisson(I0*I), raw counts returned. When epsilon > 0 is given,
   I0 is chosen so the expected relative L2 error sqrt(sum I0*I)/(I0*||I||_2)
   equals epsilon; otherwise pass i0 > 0 directly. */
NoisyData add_poisson_noise(const IntensityData& data, double epsilon, double i0,
                            uint64_t seed);

/* Data-space weights: 0 for angles outside [theta_lo, theta_hi), and (for
   farfield) 0 on detector pixels with frequency radius |xi_dis| below
   beam_stop_radius (xi per axis = 2*pi*j/n, FFT order); 1 elsewhere. */
std::vector<double> make_masks(const std::vector<double>& angles, int ky, int kx,
                               double theta_lo, double theta_hi,
                               double beam_stop_radius = 0.0);

} // namespace pct
