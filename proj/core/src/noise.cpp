#include "ctpt/noise.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>

#include "ctpt/eigen.hpp"
#include "ctpt/error.hpp"

namespace ctpt {

namespace {

// Gaussian draws via Box-Muller on uniforms built directly from generator
// bits; std::normal_distribution is implementation-defined and would break
// seed reproducibility across standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;          // [0,1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

struct ModeBasis {
  Vector lambdas;      // descending, kernel excluded
  Matrix vectors;      // columns match lambdas
  Vector kernel_axis;  // unit eigenvector of the kernel mode
};

ModeBasis mode_basis(const DynamicsKernel& kernel) {
  const int n = kernel.symmetrized.rows();
  const EigenDecomposition eig = symmetric_eigen(symmetrize(kernel.symmetrized));

  Vector b = kernel.B_diag;
  const double bn = norm2(b);
  for (double& v : b) v /= bn;
  int kernel_idx = 0;
  double best_cos = -1.0;
  for (int k = 0; k < n; ++k) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += eig.vectors(i, k) * b[i];
    if (std::abs(c) > best_cos) {
      best_cos = std::abs(c);
      kernel_idx = k;
    }
  }
  if (best_cos < 0.99)
    throw Error("noise", "simulate_ou", "cannot identify the kernel mode");

  ModeBasis basis;
  basis.kernel_axis.resize(n);
  for (int i = 0; i < n; ++i) basis.kernel_axis[i] = eig.vectors(i, kernel_idx);

  basis.lambdas.reserve(n - 1);
  std::vector<int> columns;
  for (int k = n - 1; k >= 0; --k) {  // ascending storage -> descending walk
    if (k == kernel_idx) continue;
    basis.lambdas.push_back(eig.values[k]);
    columns.push_back(k);
  }
  basis.vectors = Matrix(n, n - 1);
  for (size_t c = 0; c < columns.size(); ++c)
    for (int i = 0; i < n; ++i) basis.vectors(i, static_cast<int>(c)) = eig.vectors(i, columns[c]);
  return basis;
}

struct TrialStats {
  Vector m1, m2, m3, m4;     // raw moment sums per mode
  Matrix cross;              // raw cross-product sums
  Matrix histogram;
  long samples = 0;
};

TrialStats run_trial(const Matrix& step_matrix, const ModeBasis& basis, double kappa,
                     double dt, long burn_steps, long measure_steps,
                     const Vector& predicted_var, std::uint64_t seed) {
  const int n = step_matrix.rows();
  const int modes = static_cast<int>(basis.lambdas.size());
  GaussianSource gauss(seed);
  const double noise_scale = kappa * std::sqrt(dt);
  Vector bin_width(modes);
  for (int c = 0; c < modes; ++c) bin_width[c] = std::sqrt(predicted_var[c]) / 6.0;

  TrialStats stats;
  stats.m1.assign(modes, 0.0);
  stats.m2.assign(modes, 0.0);
  stats.m3.assign(modes, 0.0);
  stats.m4.assign(modes, 0.0);
  stats.cross = Matrix(modes, modes);
  stats.histogram = Matrix(modes, kNoiseHistogramBins);

  Vector beta(n, 0.0), next(n, 0.0), y(modes, 0.0);
  for (long s = 0; s < burn_steps + measure_steps; ++s) {
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += step_matrix(i, j) * beta[j];
      next[i] = v + noise_scale * gauss();
    }
    // Pin the kernel component; it has no restoring force and would
    // random-walk without bound.
    double k = 0.0;
    for (int i = 0; i < n; ++i) k += basis.kernel_axis[i] * next[i];
    for (int i = 0; i < n; ++i) beta[i] = next[i] - k * basis.kernel_axis[i];

    for (int i = 0; i < n; ++i)
      if (!std::isfinite(beta[i]))
        throw Error("noise", "simulate_ou", "state became non-finite",
                    "step " + std::to_string(s));

    if (s < burn_steps) continue;
    for (int c = 0; c < modes; ++c) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += basis.vectors(i, c) * beta[i];
      y[c] = v;
      const double v2 = v * v;
      stats.m1[c] += v;
      stats.m2[c] += v2;
      stats.m3[c] += v2 * v;
      stats.m4[c] += v2 * v2;
      const int bin = static_cast<int>(std::floor(v / bin_width[c] + 0.5)) +
                      kNoiseHistogramBins / 2;
      if (bin >= 0 && bin < kNoiseHistogramBins) stats.histogram(c, bin) += 1.0;
    }
    for (int a = 0; a < modes; ++a)
      for (int c = 0; c < modes; ++c) stats.cross(a, c) += y[a] * y[c];
    ++stats.samples;
  }
  return stats;
}

}  // namespace

double noise_histogram_center(double var, int bin) {
  return (bin - kNoiseHistogramBins / 2) * std::sqrt(var) / 6.0;
}

Vector stationary_prediction(const Vector& mode_lambdas, double kappa) {
  Vector out(mode_lambdas.size());
  for (size_t k = 0; k < mode_lambdas.size(); ++k) {
    if (!(mode_lambdas[k] < 0.0))
      throw Error("noise", "stationary_prediction", "mode eigenvalue must be negative",
                  "mode " + std::to_string(k));
    out[k] = kappa * kappa / (-2.0 * mode_lambdas[k]);
  }
  return out;
}

NoiseReport simulate_ou(const Market& m, const Equilibrium& eq,
                        const DynamicsKernel& kernel, const NoiseOptions& opts) {
  const int n = m.n;
  if (!(opts.kappa > 0.0))
    throw Error("noise", "simulate_ou", "kappa must be positive");
  if (!(opts.dt > 0.0) || !(opts.horizon > 0.0))
    throw Error("noise", "simulate_ou", "horizon and dt must be positive");
  if (opts.trials < 1)
    throw Error("noise", "simulate_ou", "trials must be at least 1");

  const ModeBasis basis = mode_basis(kernel);
  const int modes = static_cast<int>(basis.lambdas.size());
  const double slowest = std::abs(basis.lambdas.front());
  const double fastest = std::abs(basis.lambdas.back());
  if (opts.dt > 0.01 / fastest * (1.0 + 1e-12))
    throw Error("noise", "simulate_ou", "dt exceeds 0.01 / |fastest mode|");
  if (opts.horizon < 50.0 / slowest)
    throw Error("noise", "simulate_ou", "horizon shorter than 50 / |slowest mode|");

  NoiseReport report;
  report.kappa = opts.kappa;
  report.dt = opts.dt;
  report.horizon = opts.horizon;
  report.burn_in = opts.burn_in >= 0.0 ? opts.burn_in : 10.0 / slowest;
  report.seed = opts.seed;
  report.trials = opts.trials;
  report.mode_lambdas = basis.lambdas;
  report.predicted_var = stationary_prediction(basis.lambdas, opts.kappa);

  Matrix step_matrix = kernel.symmetrized;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) step_matrix(i, j) *= opts.dt;
    step_matrix(i, i) += 1.0;
  }

  const long burn_steps = static_cast<long>(std::ceil(report.burn_in / opts.dt));
  const long measure_steps = static_cast<long>(std::ceil(opts.horizon / opts.dt));

  std::vector<std::future<TrialStats>> futures;
  futures.reserve(opts.trials);
  for (int t = 0; t < opts.trials; ++t) {
    const std::uint64_t trial_seed =
        opts.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(t + 1);
    futures.push_back(std::async(std::launch::async, run_trial, std::cref(step_matrix),
                                 std::cref(basis), opts.kappa, opts.dt, burn_steps,
                                 measure_steps, std::cref(report.predicted_var),
                                 trial_seed));
  }

  TrialStats total;
  total.m1.assign(modes, 0.0);
  total.m2.assign(modes, 0.0);
  total.m3.assign(modes, 0.0);
  total.m4.assign(modes, 0.0);
  total.cross = Matrix(modes, modes);
  total.histogram = Matrix(modes, kNoiseHistogramBins);
  for (auto& f : futures) {
    const TrialStats t = f.get();
    for (int c = 0; c < modes; ++c) {
      total.m1[c] += t.m1[c];
      total.m2[c] += t.m2[c];
      total.m3[c] += t.m3[c];
      total.m4[c] += t.m4[c];
    }
    total.cross = total.cross + t.cross;
    total.histogram = total.histogram + t.histogram;
    total.samples += t.samples;
  }
  report.histogram = total.histogram;

  const double count = static_cast<double>(total.samples);
  report.empirical_var.resize(modes);
  report.rel_error.resize(modes);
  report.cross_covariance = Matrix(modes, modes);
  for (int c = 0; c < modes; ++c) {
    const double mean = total.m1[c] / count;
    report.empirical_var[c] = total.m2[c] / count - mean * mean;
    report.rel_error[c] =
        std::abs(report.empirical_var[c] - report.predicted_var[c]) /
        report.predicted_var[c];
  }
  for (int a = 0; a < modes; ++a)
    for (int c = 0; c < modes; ++c)
      report.cross_covariance(a, c) =
          total.cross(a, c) / count - (total.m1[a] / count) * (total.m1[c] / count);

  {
    const double m1 = total.m1[0] / count;
    const double m2 = total.m2[0] / count;
    const double m3 = total.m3[0] / count;
    const double m4 = total.m4[0] / count;
    const double mu2 = m2 - m1 * m1;
    const double mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
    const double mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
    report.slow_mode_skewness = mu3 / std::pow(mu2, 1.5);
    report.slow_mode_excess_kurtosis = mu4 / (mu2 * mu2) - 3.0;
  }
  report.effective_samples = opts.horizon * slowest / 2.0 * opts.trials;

  report.predicted_alpha_std.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < modes; ++c) {
      const double coeff = basis.vectors(i, c) / kernel.B_diag[i];
      s += report.predicted_var[c] * coeff * coeff;
    }
    report.predicted_alpha_std[i] = std::sqrt(s);
  }
  return report;
}

}  // namespace ctpt
