#pragma once

#include <cstdint>

#include "ctpt/market.hpp"

namespace ctpt {

struct AdjacencyPair {
  Matrix W;
  Matrix W_tilde;
  double nu = 1.0;
};

/// Circulant 0/1 market: C_ij = 1 iff (j-i) mod n lies in
/// {1..half_degree} or {n-half_degree..n-1}, plus the diagonal when
/// self_loop is set. Every participant has the same degree and the
/// equilibrium prices are uniform.
Market gen_uniform_circulant(int n, int half_degree, bool self_loop);

/// Chain with geometrically skewed coefficients C_ij = a^{j-i} on
/// |i-j| <= 1 (self-loops included), row-normalized. Price disparity grows
/// like a^{2n} while the coefficient row sums stay bounded in n.
Market gen_price_chain(int n, double a, double delta);

/// Chain on participants -n..n (delta = 1) whose coefficients are chosen so
/// the equilibrium prices are exactly A^{|i|}: away-from-origin coefficients
/// all equal A, toward-origin coefficients follow the detailed-balance
/// recurrences, self-loops are 1, and rows are normalized last.
Market gen_exp_gap_chain(int n, double A);

/// Toward-origin coefficients C_{i+1,i}, i = 0..n-1, before row
/// normalization; they converge geometrically to 1/A^2.
Vector exp_gap_backward_coefficients(int n, double A);

/// Two 4-vertex paths with middle edge weight 1 and outer weights x and
/// x/nu0: the pair attaining the weight-ratio stability bound.
AdjacencyPair gen_tightness_pair(double x, double nu0);

struct RandomDbMarket {
  Market market;
  Vector phi;  // detailed-balance potentials of the emitted C: phi_i C_ij = phi_j C_ji
};

/// Random circulation-free market: draws a connected symmetric weight
/// matrix S on a random support and divides row i by phi_i, the smallest
/// entry of row i of S. The result is row-normalized with
/// phi_i C_ij = phi_j C_ji holding exactly, so the circulation-free
/// condition is satisfied by construction. Deterministic in seed.
RandomDbMarket gen_random_db_detailed(int n, double density, std::uint64_t seed,
                                      double delta);

Market gen_random_db(int n, double density, std::uint64_t seed, double delta);

/// C_ij = S_ij / phi_i for a symmetric S and positive potentials phi.
/// phi = all ones reproduces the symmetric S itself.
Market market_from_potentials(const Matrix& S, const Vector& phi, double delta);

}  // namespace ctpt
