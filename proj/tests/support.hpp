#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// deliberately avoid the library code paths they are used to check.

#include <cmath>
#include <random>
#include <stack>
#include <vector>

#include "ctpt/equilibrium.hpp"
#include "ctpt/generators.hpp"
#include "ctpt/market.hpp"

namespace ctpt::testing {

// Path-product potentials along a DFS spanning tree (the library uses BFS),
// renormalized so the minimum is 1. Valid for any circulation-free C.
inline Vector oracle_psi(const Matrix& c) {
  const int n = c.rows();
  std::vector<double> lpsi(n, 0.0);
  std::vector<char> seen(n, 0);
  std::stack<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  while (!frontier.empty()) {
    const int i = frontier.top();
    frontier.pop();
    for (int j = n - 1; j >= 0; --j) {
      if (seen[j] || j == i || !(c(i, j) > 0.0 && c(j, i) > 0.0)) continue;
      seen[j] = 1;
      lpsi[j] = lpsi[i] + std::log(c(i, j)) - std::log(c(j, i));
      frontier.push(j);
    }
  }
  double lmin = lpsi[0];
  for (double v : lpsi) lmin = std::min(lmin, v);
  Vector psi(n);
  for (int j = 0; j < n; ++j) psi[j] = std::exp(lpsi[j] - lmin);
  return psi;
}

// Brute-force equilibrium for n in {2, 3}: minimize the worst clearing
// error over a grid of log prices with fixed geometric mean. Returns the
// grid optimum and the grid spacing.
struct GridOptimum {
  Vector prices;
  double spacing = 0.0;
  double objective = 0.0;
};

inline GridOptimum oracle_grid_equilibrium(const Market& m, double log_range,
                                           int points_per_axis) {
  const int n = m.n;
  GridOptimum best;
  best.objective = 1e300;
  best.spacing = 2.0 * log_range / (points_per_axis - 1);

  const auto evaluate = [&](const Vector& logs) {
    Vector p(n);
    double mean = 0.0;
    for (double v : logs) mean += v;
    mean /= n;
    for (int j = 0; j < n; ++j) p[j] = std::exp(logs[j] - mean);
    const double objective = clearing_residual(m, p);
    if (objective < best.objective) {
      best.objective = objective;
      best.prices = p;
    }
  };

  if (n == 2) {
    for (int a = 0; a < points_per_axis; ++a) {
      const double x = -log_range + a * best.spacing;
      evaluate({x, 0.0});
    }
  } else if (n == 3) {
    for (int a = 0; a < points_per_axis; ++a)
      for (int b = 0; b < points_per_axis; ++b) {
        const double x = -log_range + a * best.spacing;
        const double y = -log_range + b * best.spacing;
        evaluate({x, y, 0.0});
      }
  }
  return best;
}

// Connected symmetric weighted graph plus a same-support reweighting, used
// by the Laplacian stability checks.
struct WeightedPair {
  Matrix W;
  Matrix W_tilde;
};

inline WeightedPair random_weighted_pair(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WeightedPair pair;
  pair.W = Matrix(n, n);
  pair.W_tilde = Matrix(n, n);
  for (int j = 1; j < n; ++j) {
    // Random tree plus extra edges keeps the support connected.
    std::uniform_int_distribution<int> pick(0, j - 1);
    const int i = pick(rng);
    const double w = std::exp(2.0 * unit(rng) - 1.0);
    pair.W(i, j) = pair.W(j, i) = w;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!(pair.W(i, j) > 0.0) && unit(rng) < 0.3) {
        const double w = std::exp(2.0 * unit(rng) - 1.0);
        pair.W(i, j) = pair.W(j, i) = w;
      }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (pair.W(i, j) > 0.0) {
        const double factor = std::exp(unit(rng) - 0.5);
        pair.W_tilde(i, j) = pair.W_tilde(j, i) = pair.W(i, j) * factor;
      }
  return pair;
}

// Deterministic mix of generator outputs used by property suites.
inline std::vector<Market> fixture_markets(int max_n = 20) {
  std::vector<Market> markets;
  markets.push_back(Market{2, 1.0, [] {
                             Matrix c(2, 2);
                             c(0, 1) = c(1, 0) = 1.0;
                             return c;
                           }()});
  markets.push_back(gen_uniform_circulant(4, 1, false));
  markets.push_back(gen_uniform_circulant(5, 2, true));
  markets.push_back(gen_uniform_circulant(8, 2, false));
  markets.push_back(gen_price_chain(4, 1.5, 1.0));
  markets.push_back(gen_price_chain(6, 2.0, 0.5));
  markets.push_back(gen_exp_gap_chain(2, 2.0));
  markets.push_back(gen_exp_gap_chain(4, 2.0));
  markets.push_back(gen_random_db(4, 0.7, 11, 1.0));
  markets.push_back(gen_random_db(6, 0.5, 12, 0.25));
  markets.push_back(gen_random_db(8, 0.4, 13, 2.0));
  markets.push_back(gen_random_db(10, 0.35, 14, 0.5));
  markets.push_back(gen_random_db(12, 0.3, 15, 1.0));
  std::vector<Market> out;
  for (auto& m : markets)
    if (m.n <= max_n) out.push_back(std::move(m));
  return out;
}

}  // namespace ctpt::testing
