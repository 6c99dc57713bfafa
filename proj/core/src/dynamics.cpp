#include "ctpt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctpt/eigen.hpp"
#include "ctpt/error.hpp"

namespace ctpt {

namespace {

constexpr double kSolvedResidualThreshold = 1e-8;

void check_solved(const Equilibrium& eq, int n, const char* op) {
  if (static_cast<int>(eq.r.size()) != n || static_cast<int>(eq.R.size()) != n)
    throw Error("dynamics", op, "equilibrium does not match market size");
  if (eq.clearing_residual > kSolvedResidualThreshold ||
      eq.balance_residual > kSolvedResidualThreshold)
    throw Error("dynamics", op, "equilibrium residuals above threshold");
}

Vector anchored_b_diag(const Market& m, const Equilibrium& eq) {
  Vector b(m.n);
  const double anchor = std::pow(eq.r[0], 1.0 + m.delta) / eq.R[0];
  for (int k = 0; k < m.n; ++k) b[k] = std::sqrt(eq.r[k] * anchor);
  return b;
}

}  // namespace

DynamicsKernel build_D_analytic(const Market& m, const Equilibrium& eq) {
  check_solved(eq, m.n, "build_D_analytic");
  const int n = m.n;
  const double d = m.delta;
  const Vector& r = eq.r;
  const Vector& R = eq.R;

  Vector rd(n);  // r_i^delta
  Vector g(n);   // 1 / (R_i r_i^delta)
  for (int i = 0; i < n; ++i) {
    rd[i] = std::pow(r[i], d);
    g[i] = 1.0 / (R[i] * rd[i]);
  }

  DynamicsKernel kernel;
  kernel.D = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    double diag = m.C(j, j) * g[j] - (1.0 + d);
    for (int i = 0; i < n; ++i) diag += d * m.C(i, j) * m.C(j, i) * g[i] * g[j];
    kernel.D(j, j) = diag;

    const double rj1d = std::pow(r[j], 1.0 + d);
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      double v = r[k] * m.C(k, j) / (rj1d * R[k]);
      v += d * std::pow(r[k], 1.0 - d) * m.C(k, k) * m.C(k, j) / (rj1d * R[k] * R[k]);
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        s += r[i] * m.C(i, j) * m.C(i, k) / (R[i] * R[i]);
      }
      v += d * s / (rd[k] * rj1d);
      kernel.D(j, k) = v;
    }
  }

  kernel.B_diag = anchored_b_diag(m, eq);
  kernel.symmetrized = Matrix(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      kernel.symmetrized(j, k) = kernel.B_diag[j] * kernel.D(j, k) / kernel.B_diag[k];
  if (max_asymmetry(kernel.symmetrized) > 1e-9 * std::max(1.0, max_abs(kernel.symmetrized)))
    throw Error("dynamics", "build_D_analytic",
                "similarity transform failed to symmetrize the kernel");
  return kernel;
}

Matrix build_D_numeric(const Market& m, const Equilibrium& eq, double h) {
  check_solved(eq, m.n, "build_D_numeric");
  if (!(h >= 1e-7 && h <= 1e-3))
    throw Error("dynamics", "build_D_numeric", "step must lie in [1e-7, 1e-3]");
  const int n = m.n;
  Matrix d(n, n);
  Vector p_plus(n), p_minus(n);
  for (int i = 0; i < n; ++i) {
    p_plus = eq.r;
    p_minus = eq.r;
    p_plus[i] *= std::exp(h);
    p_minus[i] *= std::exp(-h);
    const Vector f_plus = total_demand(m, p_plus);
    const Vector f_minus = total_demand(m, p_minus);
    for (int j = 0; j < n; ++j) d(j, i) = (f_plus[j] - f_minus[j]) / (2.0 * h);
  }
  return d;
}

KernelSplit project_out_kernel(const Vector& alpha, const Vector& B_diag) {
  const size_t n = alpha.size();
  if (B_diag.size() != n)
    throw Error("dynamics", "project_out_kernel", "size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double b2 = B_diag[i] * B_diag[i];
    if (!(b2 > 0.0))
      throw Error("dynamics", "project_out_kernel", "B diagonal must be positive");
    num += b2 * alpha[i];
    den += b2;
  }
  KernelSplit split;
  split.c = num / den;
  split.alpha_bar.resize(n);
  for (size_t i = 0; i < n; ++i) split.alpha_bar[i] = alpha[i] - split.c;
  return split;
}

double b_norm(const Vector& x, const Vector& B_diag) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double v = B_diag[i] * x[i];
    s += v * v;
  }
  return std::sqrt(s);
}

Trajectory simulate_ctpt(const Market& m, const Equilibrium& eq, const Vector& alpha0,
                         const SimulateOptions& opts) {
  check_solved(eq, m.n, "simulate_ctpt");
  const int n = m.n;
  if (static_cast<int>(alpha0.size()) != n)
    throw Error("dynamics", "simulate_ctpt", "alpha0 size must match n");
  if (norm_inf(alpha0) > 0.1)
    throw Error("dynamics", "simulate_ctpt",
                "alpha0 exceeds the near-equilibrium regime (sup norm 0.1)");
  if (!(opts.dt > 0.0) || !(opts.horizon > 0.0))
    throw Error("dynamics", "simulate_ctpt", "horizon and dt must be positive");
  const int stride = std::max(1, opts.record_stride);

  const Vector b_diag = anchored_b_diag(m, eq);

  Vector p(n);
  for (int j = 0; j < n; ++j) p[j] = eq.r[j] * std::exp(alpha0[j]);

  const auto derivative = [&](const Vector& state) {
    Vector f = total_demand(m, state);
    for (int j = 0; j < n; ++j) f[j] = (f[j] - 1.0) * state[j];
    return f;
  };

  Trajectory traj;
  const long steps = static_cast<long>(std::ceil(opts.horizon / opts.dt - 1e-12));
  traj.times.reserve(steps / stride + 2);
  traj.prices.reserve(steps / stride + 2);
  traj.alpha_bar_b_norm.reserve(steps / stride + 2);

  Vector alpha(n), k1, k2, k3, k4, mid(n);
  const auto record = [&](double t) {
    for (int j = 0; j < n; ++j) alpha[j] = std::log1p((p[j] - eq.r[j]) / eq.r[j]);
    const KernelSplit split = project_out_kernel(alpha, b_diag);
    traj.times.push_back(t);
    traj.prices.push_back(p);
    traj.alpha_bar_b_norm.push_back(b_norm(split.alpha_bar, b_diag));
  };

  record(0.0);
  const double dt = opts.dt;
  for (long s = 1; s <= steps; ++s) {
    k1 = derivative(p);
    for (int j = 0; j < n; ++j) mid[j] = p[j] + 0.5 * dt * k1[j];
    k2 = derivative(mid);
    for (int j = 0; j < n; ++j) mid[j] = p[j] + 0.5 * dt * k2[j];
    k3 = derivative(mid);
    for (int j = 0; j < n; ++j) mid[j] = p[j] + dt * k3[j];
    k4 = derivative(mid);
    for (int j = 0; j < n; ++j)
      p[j] += dt / 6.0 * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);

    for (int j = 0; j < n; ++j)
      if (!(p[j] > 0.0) || !std::isfinite(p[j]))
        throw Error("dynamics", "simulate_ctpt", "price left the positive orthant",
                    "good " + std::to_string(j) + " at t = " + std::to_string(s * dt));

    if (s % stride == 0 || s == steps) record(s * dt);
  }

  // Least-squares slope of log ||alpha_bar||_B over the relative window
  // [fit_lo, fit_hi] * initial norm; falls back to dropping the leading 20%
  // of samples when the window is too thin.
  const double initial = traj.alpha_bar_b_norm.front();
  int first = -1;
  int last = -1;
  if (initial > 0.0) {
    for (size_t i = 0; i < traj.alpha_bar_b_norm.size(); ++i) {
      const double rel = traj.alpha_bar_b_norm[i] / initial;
      if (rel <= opts.fit_hi && rel >= opts.fit_lo && traj.alpha_bar_b_norm[i] > 0.0) {
        if (first < 0) first = static_cast<int>(i);
        last = static_cast<int>(i);
      }
    }
  }
  if (first < 0 || last - first < 8) {
    first = static_cast<int>(traj.alpha_bar_b_norm.size() / 5);
    last = static_cast<int>(traj.alpha_bar_b_norm.size()) - 1;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int i = first; i <= last; ++i) {
    if (!(traj.alpha_bar_b_norm[i] > 0.0)) continue;
    const double x = traj.times[i];
    const double y = std::log(traj.alpha_bar_b_norm[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    traj.fitted_rate = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    traj.fit_first = first;
    traj.fit_last = last;
  }
  return traj;
}

Vector mode_direction(const DynamicsKernel& kernel, int mode) {
  const int n = kernel.symmetrized.rows();
  if (mode < 0 || mode >= n)
    throw Error("dynamics", "mode_direction", "mode index out of range");
  const EigenDecomposition eig = symmetric_eigen(symmetrize(kernel.symmetrized));
  // Ascending order: mode 0 (kernel, eigenvalue 0) is the last column.
  const int column = n - 1 - mode;
  Vector direction(n);
  for (int i = 0; i < n; ++i) direction[i] = eig.vectors(i, column) / kernel.B_diag[i];
  const double scale = norm_inf(direction);
  for (double& v : direction) v /= scale;
  return direction;
}

}  // namespace ctpt
