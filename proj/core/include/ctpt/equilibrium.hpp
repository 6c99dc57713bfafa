#pragma once

#include "ctpt/market.hpp"

namespace ctpt {

/// Equilibrium prices r (geometric mean 1) plus the CES row sums
/// R_i = sum_k C_ik / r_k^delta and both residual diagnostics:
/// clearing = max_j |d_j(r) - 1| and balance = worst relative mismatch of
/// pairwise payments d_ij r_j vs d_ji r_i across edges.
struct Equilibrium {
  Vector r;
  Vector R;
  double clearing_residual = 0.0;
  double balance_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SolveOptions {
  double tol = 1e-12;  // sup-norm tolerance on log prices
  int max_iter = 0;    // 0: derived from tol and delta, floor 10000
  Vector initial;      // starting prices; empty means all ones
};

/// Per-pair demands d_ij = p_i C_ij / (p_j^{1+delta} P_i(p)) with
/// P_i(p) = sum_k C_ik / p_k^delta. Rows satisfy the budget identity
/// sum_j d_ij p_j = p_i.
Matrix demand(const Market& m, const Vector& p);

/// Column sums of demand: total demand per good.
Vector total_demand(const Market& m, const Vector& p);

/// total_demand(m, p) - 1, the drive term of proportional price adjustment.
Vector excess_demand(const Market& m, const Vector& p);

double clearing_residual(const Market& m, const Vector& p);

/// Worst relative mismatch of payments across edges; zero iff the market is
/// in detailed balance at r.
double detailed_balance_residual(const Market& m, const Vector& r);

/// Fixed-point iteration p <- f(p) in log coordinates, where
/// f0_j(p) = |p|^{(1+2d)/(1+d)} (psi_j P_j(p))^{1/(1+d)} normalized to
/// geometric mean 1. Contracts empirically with ratio about delta/(1+delta).
/// On max_iter exhaustion returns the best iterate with converged = false.
Equilibrium solve_equilibrium(const Market& m, const Potentials& pot,
                              const SolveOptions& opts = {});

}  // namespace ctpt
