#include "ctpt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ctpt/error.hpp"

namespace ctpt {

namespace {

constexpr double kSolvedResidualThreshold = 1e-8;

void check_solved(const Equilibrium& eq, int n, const char* op) {
  if (static_cast<int>(eq.r.size()) != n || static_cast<int>(eq.R.size()) != n)
    throw Error("spectral", op, "equilibrium does not match market size");
  if (eq.clearing_residual > kSolvedResidualThreshold ||
      eq.balance_residual > kSolvedResidualThreshold)
    throw Error("spectral", op, "equilibrium residuals above threshold",
                "clearing " + std::to_string(eq.clearing_residual) + ", balance " +
                    std::to_string(eq.balance_residual));
}

int kernel_mode_index(const EigenDecomposition& eig, const Vector& b_diag,
                      const char* op) {
  const int n = static_cast<int>(b_diag.size());
  Vector b = b_diag;
  const double bn = norm2(b);
  for (double& v : b) v /= bn;
  int best = 0;
  double best_cos = -1.0;
  for (int k = 0; k < n; ++k) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += eig.vectors(i, k) * b[i];
    if (std::abs(c) > best_cos) {
      best_cos = std::abs(c);
      best = k;
    }
  }
  if (best_cos < 0.99)
    throw Error("spectral", op, "no eigenvector aligns with the kernel direction B*1",
                "best |cos| = " + std::to_string(best_cos));
  return best;
}

}  // namespace

Matrix laplacian(const Matrix& a) {
  const int n = a.rows();
  if (n == 0 || a.cols() != n)
    throw Error("spectral", "laplacian", "adjacency must be square and nonempty");
  const double scale = std::max(1.0, max_abs(a));
  if (max_asymmetry(a) > 1e-12 * scale)
    throw Error("spectral", "laplacian", "adjacency must be symmetric");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a(i, j) < 0.0)
        throw Error("spectral", "laplacian", "adjacency must be nonnegative",
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");

  Vector w(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a(i, j);
    if (!(s > 0.0))
      throw Error("spectral", "laplacian", "adjacency has a zero row",
                  "row " + std::to_string(i));
    w[i] = std::sqrt(s);
  }

  Matrix l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) l(i, j) = -a(i, j) / (w[i] * w[j]);
    l(i, i) += 1.0;
  }
  return l;
}

Matrix build_ell(const Market& m, const Equilibrium& eq) {
  check_solved(eq, m.n, "build_ell");
  const int n = m.n;
  const double d = m.delta;
  Vector g(n);  // 1 / (R_i r_i^delta)
  for (int i = 0; i < n; ++i) g[i] = 1.0 / (eq.R[i] * std::pow(eq.r[i], d));

  Matrix ell(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!(m.C(i, j) > 0.0)) continue;
      ell(j, i) = std::sqrt(m.C(i, j) * m.C(j, i) * g[i] * g[j]);
      // Equivalent detailed-balance form: ell_jk = C_jk sqrt(r_j) / (R_j sqrt(r_k^{1+2d}))
      const double alt =
          m.C(j, i) * std::sqrt(eq.r[j]) /
          (eq.R[j] * std::sqrt(std::pow(eq.r[i], 1.0 + 2.0 * d)));
      if (std::abs(ell(j, i) - alt) > 1e-9 * std::max(ell(j, i), alt))
        throw Error("spectral", "build_ell",
                    "coupling forms disagree; equilibrium is not in detailed balance",
                    "edge (" + std::to_string(j) + "," + std::to_string(i) + ")");
    }
  }
  return ell;
}

Vector build_B(const Market& m, const Equilibrium& eq, const Potentials& pot) {
  check_solved(eq, m.n, "build_B");
  const int n = m.n;
  const double d = m.delta;
  if (static_cast<int>(pot.psi.size()) != n)
    throw Error("spectral", "build_B", "potentials do not match market size");

  const int i0 = pot.base_vertex;
  const double anchor = std::pow(eq.r[i0], 1.0 + d) / eq.R[i0];
  Vector b(n);
  for (int j = 0; j < n; ++j) {
    b[j] = std::pow(eq.r[j], 1.0 + 0.5 * d) / std::sqrt(eq.R[j] * pot.psi[j]);
    const double closed = std::sqrt(eq.r[j] * anchor);
    if (std::abs(b[j] - closed) > 1e-9 * std::max(b[j], closed))
      throw Error("spectral", "build_B", "diagonal basis forms disagree",
                  "vertex " + std::to_string(j));
  }
  return b;
}

double q_eval(double delta, double lambda) {
  return -(1.0 + 2.0 * delta) * lambda + delta * lambda * lambda;
}

double damping_rate(const SpectralReport& report, double delta) {
  double best = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < report.eigenvalues.size(); ++k) {
    if (static_cast<int>(k) == report.kernel_index) continue;
    best = std::max(best, q_eval(delta, report.eigenvalues[k]));
  }
  return best;
}

double nu(const Matrix& wa, const Matrix& wb) {
  if (wa.rows() != wb.rows() || wa.cols() != wb.cols())
    throw Error("spectral", "nu", "adjacency shapes differ");
  double max_ab = 0.0;
  double max_ba = 0.0;
  for (int i = 0; i < wa.rows(); ++i) {
    for (int j = 0; j < wa.cols(); ++j) {
      const bool a_pos = wa(i, j) > 0.0;
      const bool b_pos = wb(i, j) > 0.0;
      if (a_pos != b_pos) return std::numeric_limits<double>::infinity();
      if (!a_pos) continue;  // ratio taken as 1
      max_ab = std::max(max_ab, wa(i, j) / wb(i, j));
      max_ba = std::max(max_ba, wb(i, j) / wa(i, j));
    }
  }
  if (max_ab == 0.0) return 1.0;  // both all-zero
  return max_ab * max_ba;
}

double rayleigh_quotient(const Matrix& w, const Vector& b) {
  const int n = w.rows();
  if (static_cast<int>(b.size()) != n)
    throw Error("spectral", "rayleigh_quotient", "vector size does not match");
  if (norm2(b) == 0.0)
    throw Error("spectral", "rayleigh_quotient", "vector must be nonzero");
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    double wi2 = 0.0;
    for (int j = 0; j < n; ++j) {
      wi2 += w(i, j);
      if (j > i) num += w(i, j) * (b[i] - b[j]) * (b[i] - b[j]);
    }
    den += wi2 * b[i] * b[i];
  }
  return num / den;
}

Matrix unweighted_adjacency(const Market& m) {
  Matrix u(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (m.C(i, j) > 0.0) u(i, j) = 1.0;
  return u;
}

Matrix price_adjacency(const Market& m, const Vector& r) {
  Matrix e(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (m.C(i, j) > 0.0) e(i, j) = std::sqrt(r[i] * r[j]);
  return e;
}

bool is_uniform_market(const Market& m) {
  int degree = -1;
  for (int i = 0; i < m.n; ++i) {
    int row_degree = 0;
    int col_degree = 0;
    for (int j = 0; j < m.n; ++j) {
      const double cij = m.C(i, j);
      if (cij != 0.0 && std::abs(cij - 1.0) > 1e-12) return false;
      if (m.C(i, j) > 0.0) ++row_degree;
      if (m.C(j, i) > 0.0) ++col_degree;
    }
    if (row_degree != col_degree) return false;
    if (degree < 0) degree = row_degree;
    if (row_degree != degree) return false;
  }
  return degree > 1;
}

ComparisonBounds comparison_bounds(const Market& m, const Equilibrium& eq,
                                   const Potentials& pot, const SpectralReport& report) {
  const int n = m.n;
  const double d = m.delta;
  ComparisonBounds out;
  out.damping_rate = report.damping_rate;
  out.lambda2_market = report.eigenvalues[1];
  out.uniform = is_uniform_market(m);

  out.market.lower = q_eval(d, out.lambda2_market);
  out.market.upper = std::max(out.market.lower, -2.0);

  const Matrix u = unweighted_adjacency(m);
  const Matrix e = price_adjacency(m, eq.r);
  out.lambda2_unweighted = symmetric_eigen(laplacian(u)).values[1];
  out.lambda2_prices = symmetric_eigen(laplacian(e)).values[1];
  out.nu_unweighted = nu(report.W, u);
  out.nu_prices = nu(report.W, e);
  out.nu_unweighted_cap = pot.psi_tilde * std::pow(pot.gamma, 2.0 + d);
  out.nu_prices_cap = std::pow(pot.gamma, 1.0 + d);

  const double knee = 1.0 + 1.0 / (2.0 * d);
  const double trace_cap = 1.0 + 1.0 / (n - 1.0);

  const auto sandwich = [&](double lambda2_other, double nu_value) {
    BoundPair pair;
    pair.lower = q_eval(d, std::min({nu_value * lambda2_other, knee, trace_cap}));
    pair.upper = std::max(q_eval(d, lambda2_other / nu_value), -2.0);
    // Equivalent form of the upper bound through the q minimum at 1/d.
    const double equivalent = q_eval(d, std::min(lambda2_other / nu_value, 1.0 / d));
    if (std::abs(pair.upper - equivalent) > 1e-9 * std::max(1.0, std::abs(pair.upper)))
      throw Error("spectral", "comparison_bounds", "upper bound forms disagree");
    return pair;
  };

  out.unweighted = sandwich(out.lambda2_unweighted, out.nu_unweighted);
  out.prices = sandwich(out.lambda2_prices, out.nu_prices);
  return out;
}

SpectralReport market_laplacian(const Market& m, const Equilibrium& eq,
                                const Potentials& pot) {
  check_solved(eq, m.n, "market_laplacian");
  const int n = m.n;

  SpectralReport report;
  report.ell = build_ell(m, eq);
  report.B_diag = build_B(m, eq, pot);

  report.L_C = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) report.L_C(i, j) = -report.ell(i, j);
    report.L_C(i, i) += 1.0;
  }

  report.W = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      report.W(i, j) = report.B_diag[i] * report.ell(i, j) * report.B_diag[j];

  // Kernel check: L_C B|1> = 0.
  const Vector kb = matvec(report.L_C, report.B_diag);
  if (norm_inf(kb) > 1e-9 * norm_inf(report.B_diag))
    throw Error("spectral", "market_laplacian", "B*1 is not in the kernel of L_C",
                "residual " + std::to_string(norm_inf(kb)));

  const EigenDecomposition eig = symmetric_eigen(report.L_C);
  report.eigenvalues = eig.values;
  report.eigenvectors = eig.vectors;
  report.kernel_index = kernel_mode_index(eig, report.B_diag, "market_laplacian");
  report.damping_rate = damping_rate(report, m.delta);
  report.bounds = comparison_bounds(m, eq, pot, report);
  return report;
}

StationaryWalk stationary_walk(const SpectralReport& report) {
  const int n = report.W.rows();
  StationaryWalk out;
  out.walk = Matrix(n, n);
  out.stationary.resize(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    out.stationary[i] = report.B_diag[i] * report.B_diag[i];
    total += out.stationary[i];
  }
  for (int j = 0; j < n; ++j) {
    const double col_scale = report.B_diag[j] * report.B_diag[j];
    for (int i = 0; i < n; ++i) out.walk(i, j) = report.W(i, j) / col_scale;
  }
  for (int i = 0; i < n; ++i) out.stationary[i] /= total;
  return out;
}

}  // namespace ctpt
