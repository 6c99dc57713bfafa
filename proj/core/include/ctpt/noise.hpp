#pragma once

#include <cstdint>

#include "ctpt/dynamics.hpp"

namespace ctpt {

struct NoiseOptions {
  double kappa = 1.4142135623730951;  // sqrt(2): unit noise rate kappa^2/2 = 1
  double horizon = 0.0;               // measurement time after burn-in
  double dt = 0.0;
  double burn_in = -1.0;  // negative: 10 / |slowest mode|
  std::uint64_t seed = 0;
  int trials = 1;
};

/// Stationary statistics of the noise-buffeted linearized market: the state
/// beta follows d beta = (B D B^{-1}) beta dt + kappa dW with the kernel
/// component pinned to zero. Per mode the variance should settle at
/// kappa^2 / (-2 lambda). Modes are ordered by descending eigenvalue
/// (slowest first); the kernel mode is excluded throughout.
struct NoiseReport {
  double kappa = 0.0;
  double dt = 0.0;
  double horizon = 0.0;
  double burn_in = 0.0;
  std::uint64_t seed = 0;
  int trials = 1;
  Vector mode_lambdas;
  Vector predicted_var;
  Vector empirical_var;
  Vector rel_error;
  Matrix cross_covariance;  // sample covariance between distinct modes
  double slow_mode_skewness = 0.0;
  double slow_mode_excess_kurtosis = 0.0;
  double effective_samples = 0.0;  // horizon * |lambda_slow| / 2
  Vector predicted_alpha_std;      // per-coordinate log-price deviation, diagnostic
  // Per-mode sample histograms: 61 bins of width sigma_pred/6 centered on 0,
  // covering +-5 predicted standard deviations; row k belongs to mode k.
  Matrix histogram;
};

inline constexpr int kNoiseHistogramBins = 61;

/// Center of histogram bin `bin` for a mode with predicted variance `var`.
double noise_histogram_center(double var, int bin);

/// kappa^2 / (-2 lambda_k) for each mode; rejects nonnegative eigenvalues.
Vector stationary_prediction(const Vector& mode_lambdas, double kappa);

/// Euler-Maruyama integration with isotropic Gaussian increments from a
/// seeded Mersenne Twister and a Box-Muller transform, so runs are
/// bit-reproducible for a fixed seed. Independent trials run concurrently
/// and their statistics are averaged.
NoiseReport simulate_ou(const Market& m, const Equilibrium& eq,
                        const DynamicsKernel& kernel, const NoiseOptions& opts);

}  // namespace ctpt
