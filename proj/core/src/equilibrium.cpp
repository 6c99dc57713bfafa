#include "ctpt/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "ctpt/error.hpp"

namespace ctpt {

namespace {

void check_prices(const Vector& p, int n, const char* op) {
  if (static_cast<int>(p.size()) != n)
    throw Error("equilibrium", op, "price vector size must match n");
  for (int j = 0; j < n; ++j)
    if (!(p[j] > 0.0) || !std::isfinite(p[j]))
      throw Error("equilibrium", op, "prices must be strictly positive and finite",
                  "index " + std::to_string(j));
}

Vector ces_row_sums(const Market& m, const Vector& p) {
  const int n = m.n;
  Vector pd(n);
  for (int k = 0; k < n; ++k) pd[k] = std::pow(p[k], -m.delta);
  Vector out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += m.C(i, k) * pd[k];
    out[i] = s;
  }
  return out;
}

}  // namespace

Matrix demand(const Market& m, const Vector& p) {
  check_prices(p, m.n, "demand");
  const int n = m.n;
  const Vector P = ces_row_sums(m, p);
  Matrix d(n, n);
  Vector pj_pow(n);
  for (int j = 0; j < n; ++j) pj_pow[j] = std::pow(p[j], 1.0 + m.delta);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m.C(i, j) > 0.0) d(i, j) = p[i] * m.C(i, j) / (pj_pow[j] * P[i]);
  return d;
}

Vector total_demand(const Market& m, const Vector& p) {
  check_prices(p, m.n, "total_demand");
  const int n = m.n;
  const Vector P = ces_row_sums(m, p);
  Vector share(n);
  for (int i = 0; i < n; ++i) share[i] = p[i] / P[i];
  Vector d(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double si = share[i];
    for (int j = 0; j < n; ++j) d[j] += m.C(i, j) * si;
  }
  for (int j = 0; j < n; ++j) d[j] /= std::pow(p[j], 1.0 + m.delta);
  return d;
}

Vector excess_demand(const Market& m, const Vector& p) {
  Vector d = total_demand(m, p);
  for (double& v : d) v -= 1.0;
  return d;
}

double clearing_residual(const Market& m, const Vector& p) {
  const Vector z = excess_demand(m, p);
  return norm_inf(z);
}

double detailed_balance_residual(const Market& m, const Vector& r) {
  check_prices(r, m.n, "detailed_balance_residual");
  const int n = m.n;
  const Vector R = ces_row_sums(m, r);
  Vector rd(n);
  for (int j = 0; j < n; ++j) rd[j] = std::pow(r[j], m.delta);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!(m.C(i, j) > 0.0)) continue;
      // payment from i to j: d_ij r_j = r_i C_ij / (r_j^delta R_i)
      const double pay_ij = r[i] * m.C(i, j) / (rd[j] * R[i]);
      const double pay_ji = r[j] * m.C(j, i) / (rd[i] * R[j]);
      const double denom = std::max(pay_ij, pay_ji);
      if (denom > 0.0) worst = std::max(worst, std::abs(pay_ij - pay_ji) / denom);
    }
  }
  return worst;
}

Equilibrium solve_equilibrium(const Market& m, const Potentials& pot,
                              const SolveOptions& opts) {
  const int n = m.n;
  const double delta = m.delta;
  if (!(opts.tol > 0.0))
    throw Error("equilibrium", "solve_equilibrium", "tol must be positive");
  if (static_cast<int>(pot.psi.size()) != n)
    throw Error("equilibrium", "solve_equilibrium", "potentials do not match market");

  int max_iter = opts.max_iter;
  if (max_iter <= 0) {
    const double per_digit = std::log((1.0 + delta) / delta);
    max_iter = std::max(
        10000, 10 * static_cast<int>(std::ceil(std::log(1.0 / opts.tol) / per_digit)));
  }

  Vector lpsi(n);
  for (int j = 0; j < n; ++j) lpsi[j] = std::log(pot.psi[j]);

  Vector x(n, 0.0);
  if (!opts.initial.empty()) {
    check_prices(opts.initial, n, "solve_equilibrium");
    double mean = 0.0;
    for (int j = 0; j < n; ++j) {
      x[j] = std::log(opts.initial[j]);
      mean += x[j];
    }
    mean /= n;
    for (int j = 0; j < n; ++j) x[j] -= mean;
  }

  Equilibrium eq;
  eq.r.resize(n);
  const double residual_target = 10.0 * opts.tol;

  Vector p(n), y(n);
  int it = 0;
  bool done = false;
  while (it < max_iter && !done) {
    ++it;
    for (int j = 0; j < n; ++j) p[j] = std::exp(x[j]);
    Vector P = ces_row_sums(m, p);
    double mean = 0.0;
    for (int j = 0; j < n; ++j) {
      y[j] = (lpsi[j] + std::log(P[j])) / (1.0 + delta);
      mean += y[j];
    }
    mean /= n;
    double step = 0.0;
    for (int j = 0; j < n; ++j) {
      y[j] -= mean;
      step = std::max(step, std::abs(y[j] - x[j]));
    }
    x = y;
    if (step <= opts.tol) {
      for (int j = 0; j < n; ++j) eq.r[j] = std::exp(x[j]);
      eq.clearing_residual = clearing_residual(m, eq.r);
      eq.balance_residual = detailed_balance_residual(m, eq.r);
      done = eq.clearing_residual <= residual_target &&
             eq.balance_residual <= residual_target;
    }
  }

  eq.iterations = it;
  eq.converged = done;
  if (!done) {
    for (int j = 0; j < n; ++j) eq.r[j] = std::exp(x[j]);
    eq.clearing_residual = clearing_residual(m, eq.r);
    eq.balance_residual = detailed_balance_residual(m, eq.r);
  }

  // Recenter so the geometric mean of r is 1 to machine precision.
  double mean = 0.0;
  for (int j = 0; j < n; ++j) mean += std::log(eq.r[j]);
  mean /= n;
  if (mean != 0.0)
    for (int j = 0; j < n; ++j) eq.r[j] = std::exp(std::log(eq.r[j]) - mean);

  eq.R = ces_row_sums(m, eq.r);
  return eq;
}

}  // namespace ctpt
