#pragma once

#include "ctpt/eigen.hpp"
#include "ctpt/equilibrium.hpp"
#include "ctpt/market.hpp"

namespace ctpt {

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double value, double slack = 0.0) const {
    return value >= lower - slack && value <= upper + slack;
  }
};

/// Two-sided damping-rate bounds. `market` uses lambda2 of the market
/// Laplacian directly; `unweighted` and `prices` go through LAP(U) and
/// LAP(E) paying the weight-ratio distortion nu, with the caps
/// nu(W,U) <= psi_tilde * gamma^{2+delta} and nu(W,E) <= gamma^{1+delta}.
struct ComparisonBounds {
  double damping_rate = 0.0;
  double lambda2_market = 0.0;  // lambda_2 of L_C
  double lambda2_unweighted = 0.0;
  double lambda2_prices = 0.0;
  double nu_unweighted = 0.0;
  double nu_prices = 0.0;
  double nu_unweighted_cap = 0.0;
  double nu_prices_cap = 0.0;
  BoundPair market;
  BoundPair unweighted;
  BoundPair prices;
  bool uniform = false;
};

/// Spectral machinery of one market: the coupling matrix ell, the diagonal
/// change of basis B, the market Laplacian L_C = I - ell, the weighted
/// adjacency W = B ell B whose Laplacian is L_C, and the eigensystem of L_C.
struct SpectralReport {
  Matrix ell;
  Vector B_diag;
  Matrix L_C;
  Matrix W;
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns
  int kernel_index = 0;
  double damping_rate = 0.0;
  ComparisonBounds bounds;
};

struct StationaryWalk {
  Matrix walk;        // column-stochastic W B^{-2}
  Vector stationary;  // proportional to B_ii^2, normalized to sum 1
};

/// Normalized Laplacian LAP(A) = I - a^{-1} A a^{-1} with a_ii^2 = row sums.
/// A must be symmetric and nonnegative with no zero row.
Matrix laplacian(const Matrix& a);

/// ell_ji = sqrt(C_ij C_ji / (R_i r_i^d R_j r_j^d)); cross-checked against
/// the equivalent form C_jk sqrt(r_j) / (R_j sqrt(r_k^{1+2d})).
Matrix build_ell(const Market& m, const Equilibrium& eq);

/// B_jj = r_j^{1+d/2} / sqrt(R_j psi_j); cross-checked against the closed
/// form sqrt(r_j r_i0^{1+d} / R_i0) anchored at the potential base vertex.
Vector build_B(const Market& m, const Equilibrium& eq, const Potentials& pot);

SpectralReport market_laplacian(const Market& m, const Equilibrium& eq,
                                const Potentials& pot);

/// q(d, lambda) = -(1+2d) lambda + d lambda^2, the eigenvalue map from L_C
/// to the dynamics kernel.
double q_eval(double delta, double lambda);

/// Second-largest eigenvalue of the dynamics kernel: the maximum of
/// q(d, lambda_k) over non-kernel modes. The kernel mode is identified by
/// eigenvector alignment with B*1, not by eigenvalue.
double damping_rate(const SpectralReport& report, double delta);

/// Bidirectional entrywise weight-ratio product; >= 1, equal to 1 only for
/// scale copies, +infinity when the supports differ.
double nu(const Matrix& wa, const Matrix& wb);

ComparisonBounds comparison_bounds(const Market& m, const Equilibrium& eq,
                                   const Potentials& pot, const SpectralReport& report);

/// R_W(b) = sum_{i<j} W_ij (b_i - b_j)^2 / sum_i w_i^2 b_i^2.
double rayleigh_quotient(const Matrix& w, const Vector& b);

StationaryWalk stationary_walk(const SpectralReport& report);

/// U: 1 exactly on the support of C (self-loops included).
Matrix unweighted_adjacency(const Market& m);

/// E: sqrt(r_i r_j) on edges, r_j on self-loops, 0 elsewhere.
Matrix price_adjacency(const Market& m, const Vector& r);

/// All coefficients in {0,1} with a common degree > 1.
bool is_uniform_market(const Market& m);

}  // namespace ctpt
