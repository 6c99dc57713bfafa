#include "ctpt/generators.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "ctpt/error.hpp"

namespace ctpt {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1), bit-stable
}

bool connected(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j : adjacency[i])
      if (!seen[j]) {
        seen[j] = 1;
        ++visited;
        frontier.push(j);
      }
  }
  return visited == n;
}

}  // namespace

Market gen_uniform_circulant(int n, int half_degree, bool self_loop) {
  if (n < 3)
    throw Error("generators", "gen_uniform_circulant", "n must be at least 3");
  if (half_degree < 1 || 2 * half_degree > n - 1)
    throw Error("generators", "gen_uniform_circulant",
                "half_degree must lie in [1, (n-1)/2]");
  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int d = 1; d <= half_degree; ++d) {
      c(i, (i + d) % n) = 1.0;
      c(i, (i - d + n) % n) = 1.0;
    }
    if (self_loop) c(i, i) = 1.0;
  }
  return Market{n, 1.0, c};
}

Market gen_price_chain(int n, double a, double delta) {
  if (n < 3) throw Error("generators", "gen_price_chain", "n must be at least 3");
  if (!(a > 1.0)) throw Error("generators", "gen_price_chain", "a must exceed 1");
  if (!(delta > 0.0))
    throw Error("generators", "gen_price_chain", "delta must be positive");
  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    if (i + 1 < n) c(i, i + 1) = a;
    if (i > 0) c(i, i - 1) = 1.0 / a;
  }
  return Market{n, delta, normalize_rows(c)};
}

Vector exp_gap_backward_coefficients(int n, double A) {
  if (n < 2)
    throw Error("generators", "gen_exp_gap_chain", "n must be at least 2");
  if (!(A > 1.0)) throw Error("generators", "gen_exp_gap_chain", "A must exceed 1");
  // Pairwise payment balance at prices r_i = A^|i| pins the toward-origin
  // coefficients: at the first edge C_10 = 2/(3A^2 - A); across interior
  // edges C_{i+1,i} = 2/(A^3 C_{i,i-1} + 2A^2 - A); at the boundary edge the
  // numerator 2 becomes 1 because vertex n has no outward edge.
  Vector b(n);
  const double common = 2.0 * A * A - A;
  b[0] = 2.0 / (3.0 * A * A - A);
  for (int i = 1; i < n; ++i) {
    const double numerator = (i == n - 1) ? 1.0 : 2.0;
    b[i] = numerator / (A * A * A * b[i - 1] + common);
  }
  return b;
}

Market gen_exp_gap_chain(int n, double A) {
  const Vector b = exp_gap_backward_coefficients(n, A);
  const int size = 2 * n + 1;
  const auto v = [n](int participant) { return participant + n; };

  Matrix c(size, size);
  for (int i = -n; i <= n; ++i) c(v(i), v(i)) = 1.0;
  for (int i = 0; i < n; ++i) {
    c(v(i), v(i + 1)) = A;        // away from the origin
    c(v(-i), v(-i - 1)) = A;
    c(v(i + 1), v(i)) = b[i];     // toward the origin
    c(v(-i - 1), v(-i)) = b[i];
  }
  return Market{size, 1.0, normalize_rows(c)};
}

AdjacencyPair gen_tightness_pair(double x, double nu0) {
  if (!(x > 0.0)) throw Error("generators", "gen_tightness_pair", "x must be positive");
  if (!(nu0 >= 1.0))
    throw Error("generators", "gen_tightness_pair", "nu0 must be at least 1");
  AdjacencyPair pair;
  pair.nu = nu0;
  pair.W = Matrix(4, 4);
  pair.W(0, 1) = pair.W(1, 0) = x;
  pair.W(1, 2) = pair.W(2, 1) = 1.0;
  pair.W(2, 3) = pair.W(3, 2) = x;
  pair.W_tilde = pair.W;
  pair.W_tilde(0, 1) = pair.W_tilde(1, 0) = x / nu0;
  pair.W_tilde(2, 3) = pair.W_tilde(3, 2) = x / nu0;
  return pair;
}

RandomDbMarket gen_random_db_detailed(int n, double density, std::uint64_t seed,
                                      double delta) {
  if (n < 2) throw Error("generators", "gen_random_db", "n must be at least 2");
  if (!(density > 0.0 && density <= 1.0))
    throw Error("generators", "gen_random_db", "density must lie in (0, 1]");
  if (!(delta > 0.0)) throw Error("generators", "gen_random_db", "delta must be positive");

  std::mt19937_64 rng(seed);
  constexpr int kMaxAttempts = 1000;
  std::vector<std::vector<int>> adjacency;
  std::vector<std::pair<int, int>> edges;
  bool ok = false;
  for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
    adjacency.assign(n, {});
    edges.clear();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (uniform01(rng) < density) {
          adjacency[i].push_back(j);
          adjacency[j].push_back(i);
          edges.emplace_back(i, j);
        }
    ok = connected(adjacency);
  }
  if (!ok)
    throw Error("generators", "gen_random_db",
                "failed to sample a connected support; raise density");

  Matrix s(n, n);
  for (const auto& [i, j] : edges) {
    const double w = 1.0 + 4.0 * uniform01(rng);
    s(i, j) = w;
    s(j, i) = w;
  }
  for (int i = 0; i < n; ++i)
    if (uniform01(rng) < 0.3) s(i, i) = 1.0 + 4.0 * uniform01(rng);

  // phi_i = smallest weight in row i; dividing row i by it yields a
  // row-normalized market whose detailed-balance potentials are phi itself.
  RandomDbMarket out;
  out.phi.resize(n);
  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    double row_min = 0.0;
    for (int j = 0; j < n; ++j)
      if (s(i, j) > 0.0) row_min = row_min == 0.0 ? s(i, j) : std::min(row_min, s(i, j));
    out.phi[i] = row_min;
    for (int j = 0; j < n; ++j)
      if (s(i, j) > 0.0) c(i, j) = s(i, j) / row_min;
  }
  out.market = Market{n, delta, c};
  return out;
}

Market gen_random_db(int n, double density, std::uint64_t seed, double delta) {
  return gen_random_db_detailed(n, density, seed, delta).market;
}

Market market_from_potentials(const Matrix& s, const Vector& phi, double delta) {
  const int n = s.rows();
  if (s.cols() != n || static_cast<int>(phi.size()) != n)
    throw Error("generators", "market_from_potentials", "shape mismatch");
  if (max_asymmetry(s) > 1e-12 * std::max(1.0, max_abs(s)))
    throw Error("generators", "market_from_potentials", "S must be symmetric");
  for (double v : phi)
    if (!(v > 0.0))
      throw Error("generators", "market_from_potentials", "phi must be positive");
  Matrix c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (s(i, j) > 0.0) c(i, j) = s(i, j) / phi[i];
  return Market{n, delta, c};
}

}  // namespace ctpt
