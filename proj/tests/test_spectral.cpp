#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ctpt/error.hpp"
#include "ctpt/generators.hpp"
#include "ctpt/spectral.hpp"
#include "support.hpp"

using namespace ctpt;

namespace {

struct Analyzed {
  Market m;
  Potentials pot;
  Equilibrium eq;
  SpectralReport report;
};

Analyzed analyze(Market market) {
  Analyzed out{std::move(market), {}, {}, {}};
  out.pot = potentials(out.m);
  out.eq = solve_equilibrium(out.m, out.pot);
  REQUIRE(out.eq.converged);
  out.report = market_laplacian(out.m, out.eq, out.pot);
  return out;
}

Market two_node(double delta = 1.0) {
  Matrix c(2, 2);
  c(0, 1) = c(1, 0) = 1.0;
  return Market{2, delta, c};
}

// Equilibrium assembled from exactly known prices, bypassing the solver.
Equilibrium manual_equilibrium(const Market& m, const Vector& r) {
  Equilibrium eq;
  eq.r = r;
  eq.R.assign(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int k = 0; k < m.n; ++k)
      eq.R[i] += m.C(i, k) / std::pow(r[k], m.delta);
  eq.clearing_residual = clearing_residual(m, r);
  eq.balance_residual = detailed_balance_residual(m, r);
  eq.converged = true;
  return eq;
}

}  // namespace

TEST_CASE("laplacian of a single edge has spectrum {0, 2}") {
  Matrix a(2, 2);
  a(0, 1) = a(1, 0) = 1.0;
  const EigenDecomposition eig = symmetric_eigen(laplacian(a));
  CHECK(eig.values[0] == doctest::Approx(0.0).scale(1e-12));
  CHECK(eig.values[1] == doctest::Approx(2.0));
}

TEST_CASE("laplacian is invariant under scaling of its argument") {
  std::mt19937_64 rng(11);
  const testing::WeightedPair pair = testing::random_weighted_pair(6, rng);
  CHECK(max_abs_diff(laplacian(pair.W), laplacian(17.0 * pair.W)) < 1e-14);
}

TEST_CASE("laplacian rejects malformed adjacency") {
  Matrix zero_row(2, 2);
  zero_row(0, 0) = 1.0;
  CHECK_THROWS_AS((void)laplacian(zero_row), Error);
  Matrix asym(2, 2);
  asym(0, 1) = 1.0;
  asym(1, 0) = 2.0;
  CHECK_THROWS_AS((void)laplacian(asym), Error);
}

TEST_CASE("laplacian spectra lie in [0, 2] with one kernel mode on fixtures") {
  std::mt19937_64 rng(12);
  for (int n : {4, 7, 10}) {
    const testing::WeightedPair pair = testing::random_weighted_pair(n, rng);
    const EigenDecomposition eig = symmetric_eigen(laplacian(pair.W));
    CHECK(std::abs(eig.values[0]) < 1e-12);
    CHECK(eig.values[1] > 1e-9);
    CHECK(eig.values[n - 1] <= 2.0 + 1e-12);
  }
}

TEST_CASE("coupling matrix of the two-good market is the flip") {
  const Analyzed a = analyze(two_node());
  CHECK(a.report.ell(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.report.ell(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.report.ell(0, 0) == 0.0);
}

TEST_CASE("uniform markets have ell = U / degree and L_C = LAP(U)") {
  const Market m = gen_uniform_circulant(6, 2, true);
  const Analyzed a = analyze(m);
  const int degree = 5;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) {
      const double expected = m.C(i, j) > 0.0 ? 1.0 / degree : 0.0;
      CHECK(a.report.ell(i, j) == doctest::Approx(expected).epsilon(1e-10));
    }
  CHECK(max_abs_diff(a.report.L_C, laplacian(unweighted_adjacency(m))) < 1e-9);
  // B is a constant multiple of the identity; the global scale of B is
  // immaterial everywhere it is used.
  for (double b : a.report.B_diag)
    CHECK(b == doctest::Approx(a.report.B_diag[0]).epsilon(1e-10));
}

TEST_CASE("coupling entries on edges lie in [gamma^(-1-delta), 1]") {
  for (const Market& m : testing::fixture_markets(12)) {
    const Analyzed a = analyze(m);
    const double floor = std::pow(a.pot.gamma, -1.0 - m.delta);
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j) {
        if (!(m.C(i, j) > 0.0)) continue;
        CHECK(a.report.ell(i, j) >= floor - 1e-12);
        CHECK(a.report.ell(i, j) <= 1.0 + 1e-12);
      }
    CHECK(max_asymmetry(a.report.ell) < 1e-12);
  }
}

TEST_CASE("diagonal basis of the exponential-gap chain is sqrt(A^|k| / 3)") {
  const double A = 2.0;
  const int arm = 3;
  const Market m = gen_exp_gap_chain(arm, A);
  Vector r(m.n);
  for (int v = 0; v < m.n; ++v) r[v] = std::pow(A, std::abs(v - arm));
  const Equilibrium eq = manual_equilibrium(m, r);
  REQUIRE(eq.clearing_residual < 1e-12);  // construction is exact
  const Potentials pot = potentials(m);
  REQUIRE(pot.base_vertex == arm);
  const Vector b = build_B(m, eq, pot);
  for (int v = 0; v < m.n; ++v)
    CHECK(b[v] == doctest::Approx(std::sqrt(std::pow(A, std::abs(v - arm)) / 3.0))
                      .epsilon(1e-10));
}

TEST_CASE("both diagonal-basis forms agree on random markets") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Market m = gen_random_db(5 + static_cast<int>(seed % 6), 0.5, 300 + seed,
                                   0.5 + 0.5 * (seed % 3));
    const Potentials pot = potentials(m);
    const Equilibrium eq = solve_equilibrium(m, pot);
    REQUIRE(eq.converged);
    CHECK_NOTHROW((void)build_B(m, eq, pot));  // internal 1e-9 cross-check
  }
}

TEST_CASE("market Laplacian report invariants hold on fixtures") {
  for (const Market& m : testing::fixture_markets(12)) {
    const Analyzed a = analyze(m);
    const int n = m.n;

    CHECK(std::abs(a.report.eigenvalues[0]) < 1e-9);
    CHECK(a.report.eigenvalues[n - 1] <= 2.0 + 1e-9);
    CHECK(a.report.kernel_index == 0);

    // Eigen residuals and orthonormality.
    for (int k = 0; k < n; ++k) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v[i] = a.report.eigenvectors(i, k);
      Vector lv = matvec(a.report.L_C, v);
      for (int i = 0; i < n; ++i) lv[i] -= a.report.eigenvalues[k] * v[i];
      CHECK(norm_inf(lv) < 1e-9);
    }
    CHECK(max_abs_diff(transpose(a.report.eigenvectors) * a.report.eigenvectors,
                       Matrix::identity(n)) < 1e-10);

    // Kernel vector is B*1 and W row sums reproduce B^2.
    const Vector kernel_residual = matvec(a.report.L_C, a.report.B_diag);
    CHECK(norm_inf(kernel_residual) <= 1e-9 * norm_inf(a.report.B_diag));
    const Vector w_sums = row_sums(a.report.W);
    for (int i = 0; i < n; ++i)
      CHECK(w_sums[i] ==
            doctest::Approx(a.report.B_diag[i] * a.report.B_diag[i]).epsilon(1e-9));

    // Two-sided damping sandwich through lambda_2(L_C).
    CHECK(a.report.bounds.market.contains(a.report.damping_rate, 1e-8));
  }
}

TEST_CASE("q evaluation matches hand values") {
  CHECK(q_eval(1.0, 0.0) == 0.0);
  CHECK(q_eval(1.0, 2.0) == doctest::Approx(-2.0));
  CHECK(q_eval(0.5, 1.5) == doctest::Approx(-1.875));
  for (double delta : {0.25, 0.7, 1.0, 3.0}) {
    CHECK(q_eval(delta, 1.0 / delta) == doctest::Approx(-2.0));
    // Global minimum sits at 1 + 1/(2 delta).
    const double knee = 1.0 + 0.5 / delta;
    CHECK(q_eval(delta, knee) < q_eval(delta, knee - 1e-3));
    CHECK(q_eval(delta, knee) < q_eval(delta, knee + 1e-3));
  }
}

TEST_CASE("damping rate of the two-good market is -2") {
  const Analyzed a = analyze(two_node());
  CHECK(a.report.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(a.report.damping_rate == doctest::Approx(-2.0).epsilon(1e-11));
}

TEST_CASE("damping rate of the triangle is -2.25") {
  const Analyzed a = analyze(gen_uniform_circulant(3, 1, false));
  CHECK(a.report.damping_rate == doctest::Approx(-2.25).epsilon(1e-11));
}

TEST_CASE("complete market with self-loops damps at -(1+delta)") {
  for (double delta : {0.5, 1.0, 2.0}) {
    const int n = 5;
    Matrix c(n, n, 1.0);
    const Analyzed a = analyze(Market{n, delta, c});
    CHECK(a.report.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(a.report.damping_rate == doctest::Approx(-(1.0 + delta)).epsilon(1e-10));
  }
}

TEST_CASE("ring of four damps at -2 through the top eigenvalue") {
  // Spectrum {0,1,1,2} at delta = 1: the critical mode is lambda = 2, and
  // both nonzero eigenvalue levels map to q = -2.
  const Analyzed a = analyze(gen_uniform_circulant(4, 1, false));
  CHECK(a.report.damping_rate == doctest::Approx(-2.0).epsilon(1e-11));
}

TEST_CASE("weight-ratio distortion nu") {
  std::mt19937_64 rng(13);
  const testing::WeightedPair pair = testing::random_weighted_pair(5, rng);
  CHECK(nu(pair.W, 3.0 * pair.W) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nu(pair.W, pair.W_tilde) >= 1.0);

  Matrix other = pair.W;
  other(0, 1) = other(1, 0) = 0.0;
  other(0, 2) = other(2, 0) = 1.0;
  CHECK(std::isinf(nu(pair.W, other)));
}

TEST_CASE("comparison bounds collapse to the market bounds on uniform markets") {
  const Analyzed a = analyze(gen_uniform_circulant(6, 1, false));
  CHECK(a.report.bounds.uniform);
  CHECK(a.report.bounds.nu_unweighted == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(a.report.bounds.unweighted.lower ==
        doctest::Approx(a.report.bounds.market.lower).epsilon(1e-9));
  CHECK(a.report.bounds.unweighted.upper ==
        doctest::Approx(a.report.bounds.market.upper).epsilon(1e-9));
}

TEST_CASE("both comparison sandwiches contain the damping rate on fixtures") {
  for (const Market& m : testing::fixture_markets(12)) {
    const Analyzed a = analyze(m);
    const ComparisonBounds& b = a.report.bounds;
    CHECK(b.market.contains(a.report.damping_rate, 1e-8));
    CHECK(b.unweighted.contains(a.report.damping_rate, 1e-8));
    CHECK(b.prices.contains(a.report.damping_rate, 1e-8));
    CHECK(b.nu_unweighted <= b.nu_unweighted_cap * (1.0 + 1e-8));
    CHECK(b.nu_prices <= b.nu_prices_cap * (1.0 + 1e-8));
  }
}

TEST_CASE("price-based bounds beat unweighted bounds on the exponential-gap chain") {
  const Analyzed a = analyze(gen_exp_gap_chain(8, 2.0));
  const ComparisonBounds& b = a.report.bounds;
  CHECK(b.unweighted.contains(a.report.damping_rate, 1e-8));
  CHECK(b.prices.contains(a.report.damping_rate, 1e-8));
  // The unweighted network vastly overstates connectivity here, while the
  // price-weighted one stays within its gamma^(1+delta) distortion cap.
  CHECK(b.nu_unweighted > 2.0 * b.nu_prices);
  CHECK(b.lambda2_unweighted > 10.0 * b.lambda2_market);
}

TEST_CASE("Rayleigh quotient basics") {
  std::mt19937_64 rng(14);
  const testing::WeightedPair pair = testing::random_weighted_pair(7, rng);
  CHECK(rayleigh_quotient(pair.W, Vector(7, 1.0)) == 0.0);
  CHECK_THROWS_AS((void)rayleigh_quotient(pair.W, Vector(7, 0.0)), Error);

  const Matrix lap = laplacian(pair.W);
  const EigenDecomposition eig = symmetric_eigen(lap);
  const Vector w_root = [&] {
    Vector w(7);
    const Vector sums = row_sums(pair.W);
    for (int i = 0; i < 7; ++i) w[i] = std::sqrt(sums[i]);
    return w;
  }();
  Vector b(7);
  for (int i = 0; i < 7; ++i) b[i] = eig.vectors(i, 1) / w_root[i];
  CHECK(rayleigh_quotient(pair.W, b) == doctest::Approx(eig.values[1]).epsilon(1e-11));
}

TEST_CASE("Rayleigh quotient dominates the connectivity on the orthogonal slice") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const testing::WeightedPair pair = testing::random_weighted_pair(6, rng);
  const double lambda2 = symmetric_eigen(laplacian(pair.W)).values[1];
  Vector w2 = row_sums(pair.W);
  for (int trial = 0; trial < 100; ++trial) {
    Vector b(6);
    for (double& v : b) v = unit(rng);
    const double shift = dot(b, w2) / std::accumulate(w2.begin(), w2.end(), 0.0);
    for (double& v : b) v -= shift;  // <b, w^2> = 0
    CHECK(rayleigh_quotient(pair.W, b) >= lambda2 - 1e-9);
  }
}

TEST_CASE("Laplacian stability inequality on random same-support pairs") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + trial % 7;
    const testing::WeightedPair pair = testing::random_weighted_pair(n, rng);
    const double distortion = nu(pair.W, pair.W_tilde);
    const double l2 = symmetric_eigen(laplacian(pair.W)).values[1];
    const double l2_tilde = symmetric_eigen(laplacian(pair.W_tilde)).values[1];
    CHECK(l2_tilde <= distortion * l2 + 1e-8);
    CHECK(l2 <= distortion * l2_tilde + 1e-8);
  }
}

TEST_CASE("stationary walk of the two-good market flips between goods") {
  const Analyzed a = analyze(two_node());
  const StationaryWalk walk = stationary_walk(a.report);
  CHECK(walk.walk(0, 1) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(walk.walk(1, 0) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(walk.stationary[0] == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("stationary walk invariants on fixtures") {
  for (const Market& m : testing::fixture_markets(12)) {
    const Analyzed a = analyze(m);
    const StationaryWalk walk = stationary_walk(a.report);
    const int n = m.n;

    for (int j = 0; j < n; ++j) {
      double column = 0.0;
      for (int i = 0; i < n; ++i) column += walk.walk(i, j);
      CHECK(column == doctest::Approx(1.0).epsilon(1e-12));
    }

    Vector pi(n);
    for (int i = 0; i < n; ++i) pi[i] = a.report.B_diag[i] * a.report.B_diag[i];
    const Vector advanced = matvec(walk.walk, pi);
    for (int i = 0; i < n; ++i)
      CHECK(advanced[i] == doctest::Approx(pi[i]).epsilon(1e-9));

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double flux_ij = walk.walk(j, i) * pi[i];
        const double flux_ji = walk.walk(i, j) * pi[j];
        if (flux_ij > 0.0)
          CHECK(flux_ij == doctest::Approx(flux_ji).epsilon(1e-9));
      }
  }
}
