#include "ctpt/market.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "ctpt/error.hpp"

namespace ctpt {

namespace {

constexpr double kCirculationLogTol = 1e-9;

std::string edge_name(int i, int j) {
  std::ostringstream os;
  os << "edge (" << i << "," << j << ")";
  return os.str();
}

// BFS over the mutual support (C_ij > 0 and C_ji > 0) from `start`.
// Fills parent links and log path-product potentials for the component.
std::vector<int> bfs_component(const Matrix& c, int start, std::vector<int>& parent,
                               std::vector<double>& lpsi) {
  const int n = c.rows();
  std::vector<int> visited_order;
  std::queue<int> frontier;
  frontier.push(start);
  parent[start] = start;
  lpsi[start] = 0.0;
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    visited_order.push_back(i);
    for (int j = 0; j < n; ++j) {
      if (j == i || parent[j] >= 0) continue;
      if (c(i, j) > 0.0 && c(j, i) > 0.0) {
        parent[j] = i;
        lpsi[j] = lpsi[i] + std::log(c(i, j)) - std::log(c(j, i));
        frontier.push(j);
      }
    }
  }
  return visited_order;
}

// Tree cycle through a non-tree edge (i,j): path i -> lca -> j, closed by j -> i.
std::vector<int> tree_cycle(const std::vector<int>& parent, int i, int j) {
  std::vector<int> up_i{i};
  for (int v = i; parent[v] != v; v = parent[v]) up_i.push_back(parent[v]);
  std::vector<int> up_j{j};
  for (int v = j; parent[v] != v; v = parent[v]) up_j.push_back(parent[v]);

  int a = static_cast<int>(up_i.size()) - 1;
  int b = static_cast<int>(up_j.size()) - 1;
  while (a > 0 && b > 0 && up_i[a - 1] == up_j[b - 1]) {
    --a;
    --b;
  }
  std::vector<int> cycle(up_i.begin(), up_i.begin() + a + 1);  // i .. lca
  for (int k = b - 1; k >= 0; --k) cycle.push_back(up_j[k]);   // lca-child .. j
  return cycle;  // starts at i, ends at j
}

struct CycleProducts {
  double forward = 1.0;
  double backward = 1.0;
};

CycleProducts cycle_products(const Matrix& c, const std::vector<int>& cycle) {
  CycleProducts p;
  for (size_t k = 0; k + 1 < cycle.size(); ++k) {
    p.forward *= c(cycle[k], cycle[k + 1]);
    p.backward *= c(cycle[k + 1], cycle[k]);
  }
  p.forward *= c(cycle.back(), cycle.front());
  p.backward *= c(cycle.front(), cycle.back());
  return p;
}

std::string cycle_name(const std::vector<int>& cycle) {
  std::ostringstream os;
  os << "cycle ";
  for (size_t k = 0; k < cycle.size(); ++k) os << cycle[k] << "->";
  os << cycle.front();
  return os.str();
}

// Relative tolerance on the log of the cycle-product ratio.
bool circulation_consistent(const Matrix& c, const std::vector<double>& lpsi, int i,
                            int j) {
  const double lhs = lpsi[i] + std::log(c(i, j));
  const double rhs = lpsi[j] + std::log(c(j, i));
  const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
  return std::abs(lhs - rhs) <= kCirculationLogTol * scale;
}

}  // namespace

const ConditionCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

Matrix normalize_rows(const Matrix& c) {
  Matrix out = c;
  for (int i = 0; i < c.rows(); ++i) {
    double row_min = 0.0;
    for (int j = 0; j < c.cols(); ++j)
      if (c(i, j) > 0.0) row_min = (row_min == 0.0) ? c(i, j) : std::min(row_min, c(i, j));
    if (row_min == 0.0)
      throw Error("market", "normalize_rows", "row has no positive entry",
                  "row " + std::to_string(i));
    if (row_min != 1.0)
      for (int j = 0; j < c.cols(); ++j) out(i, j) = c(i, j) / row_min;
  }
  return out;
}

Market normalize_market(const Matrix& c_raw, const Vector& supplies, double delta) {
  const int n = c_raw.rows();
  if (n < 2 || c_raw.cols() != n)
    throw Error("market", "normalize_market", "coefficient matrix must be square, n >= 2");
  if (static_cast<int>(supplies.size()) != n)
    throw Error("market", "normalize_market", "supplies size must match n");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error("market", "normalize_market", "delta must lie in (0, inf)");
  for (double s : supplies)
    if (!(s > 0.0))
      throw Error("market", "normalize_market", "supplies must be strictly positive");

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (c_raw(i, j) < 0.0)
        throw Error("market", "normalize_market", "condition (a) violated: negative coefficient",
                    edge_name(i, j));

  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    bool any = false;
    for (int j = 0; j < n; ++j) {
      const double base = c_raw(i, j) * supplies[j];
      c(i, j) = (base == 0.0) ? 0.0 : (delta == 1.0 ? base : std::pow(base, delta));
      any = any || c(i, j) > 0.0;
    }
    if (!any)
      throw Error("market", "normalize_market", "row of c_raw is all zero",
                  "row " + std::to_string(i));
  }

  Market m{n, delta, normalize_rows(c)};
  const ValidationReport report = validate(m);
  if (!report.ok) {
    for (const auto& cond : report.conditions)
      if (!cond.passed)
        throw Error("market", "normalize_market", "condition failed: " + cond.name,
                    cond.witness);
  }
  return m;
}

ValidationReport validate(const Market& m) {
  ValidationReport report;
  const Matrix& c = m.C;
  const int n = c.rows();

  if (n < 2 || c.cols() != n || !(m.delta > 0.0)) {
    report.conditions.push_back(
        {"shape", false, "market requires a square C with n >= 2 and delta > 0"});
    report.ok = false;
    return report;
  }

  ConditionCheck nonneg{"nonnegativity", true, ""};
  for (int i = 0; i < n && nonneg.passed; ++i)
    for (int j = 0; j < n && nonneg.passed; ++j)
      if (c(i, j) < 0.0) {
        nonneg.passed = false;
        nonneg.witness = edge_name(i, j) + " is negative";
      }
  report.conditions.push_back(nonneg);

  ConditionCheck undirected{"weak_undirectedness", true, ""};
  for (int i = 0; i < n && undirected.passed; ++i)
    for (int j = 0; j < n && undirected.passed; ++j)
      if ((c(i, j) > 0.0) != (c(j, i) > 0.0)) {
        undirected.passed = false;
        undirected.witness = edge_name(i, j) + " present without its reverse";
      }
  report.conditions.push_back(undirected);

  std::vector<int> parent(n, -1);
  std::vector<double> lpsi(n, 0.0);
  const std::vector<int> component = bfs_component(c, 0, parent, lpsi);

  ConditionCheck connected{"connectedness", true, ""};
  if (static_cast<int>(component.size()) != n) {
    connected.passed = false;
    std::ostringstream os;
    os << "vertices unreachable from 0:";
    for (int v = 0; v < n; ++v)
      if (parent[v] < 0) os << " " << v;
    connected.witness = os.str();
  }
  report.conditions.push_back(connected);

  // Circulation is checked per component of the mutual support, so it stays
  // meaningful even when connectedness or undirectedness failed.
  ConditionCheck circulation{"circulation_free", true, ""};
  {
    std::vector<int> comp_parent(n, -1);
    std::vector<double> comp_lpsi(n, 0.0);
    for (int start = 0; start < n && circulation.passed; ++start) {
      if (comp_parent[start] >= 0) continue;
      bfs_component(c, start, comp_parent, comp_lpsi);
    }
    for (int i = 0; i < n && circulation.passed; ++i) {
      for (int j = 0; j < n && circulation.passed; ++j) {
        if (i == j || !(c(i, j) > 0.0 && c(j, i) > 0.0)) continue;
        if (comp_parent[j] == i || comp_parent[i] == j) continue;  // tree edge
        if (!circulation_consistent(c, comp_lpsi, i, j)) {
          circulation.passed = false;
          const std::vector<int> cycle = tree_cycle(comp_parent, i, j);
          const CycleProducts p = cycle_products(c, cycle);
          std::ostringstream os;
          os << cycle_name(cycle) << " has products " << p.forward << " vs " << p.backward;
          circulation.witness = os.str();
        }
      }
    }
  }
  report.conditions.push_back(circulation);

  ConditionCheck rownorm{"row_normalization", true, ""};
  for (int i = 0; i < n && rownorm.passed; ++i) {
    double row_min = 0.0;
    for (int j = 0; j < n; ++j)
      if (c(i, j) > 0.0) row_min = (row_min == 0.0) ? c(i, j) : std::min(row_min, c(i, j));
    if (row_min == 0.0) {
      rownorm.passed = false;
      rownorm.witness = "row " + std::to_string(i) + " has no positive entry";
    } else if (std::abs(row_min - 1.0) > 1e-12) {
      rownorm.passed = false;
      std::ostringstream os;
      os << "row " << i << " has minimum nonzero entry " << row_min;
      rownorm.witness = os.str();
    }
  }
  report.conditions.push_back(rownorm);

  report.ok = true;
  for (const auto& cond : report.conditions) report.ok = report.ok && cond.passed;
  return report;
}

Potentials potentials(const Market& m) {
  const Matrix& c = m.C;
  const int n = c.rows();
  if (n < 2 || c.cols() != n)
    throw Error("market", "potentials", "market requires a square C with n >= 2");

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (c(i, j) < 0.0)
        throw Error("market", "potentials", "negative coefficient", edge_name(i, j));
      if ((c(i, j) > 0.0) != (c(j, i) > 0.0))
        throw Error("market", "potentials", "support is not weakly undirected",
                    edge_name(i, j));
    }

  std::vector<int> parent(n, -1);
  std::vector<double> lpsi(n, 0.0);
  const std::vector<int> component = bfs_component(c, 0, parent, lpsi);
  if (static_cast<int>(component.size()) != n)
    throw Error("market", "potentials", "market graph is not connected");

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!(c(i, j) > 0.0)) continue;
      if (parent[j] == i || parent[i] == j) continue;
      if (!circulation_consistent(c, lpsi, i, j)) {
        const std::vector<int> cycle = tree_cycle(parent, i, j);
        const CycleProducts p = cycle_products(c, cycle);
        std::ostringstream os;
        os << "products " << p.forward << " vs " << p.backward << " around "
           << cycle_name(cycle);
        throw Error("market", "potentials", "circulation-free condition violated", os.str());
      }
    }
  }

  const auto lmin_it = std::min_element(lpsi.begin(), lpsi.end());
  const double lmin = *lmin_it;
  Potentials pot;
  pot.psi.resize(n);
  pot.psi_tilde = 1.0;
  for (int j = 0; j < n; ++j) {
    pot.psi[j] = std::exp(lpsi[j] - lmin);
    pot.psi_tilde = std::max(pot.psi_tilde, pot.psi[j]);
  }
  pot.base_vertex = static_cast<int>(lmin_it - lpsi.begin());
  pot.psi[pot.base_vertex] = 1.0;

  pot.gamma = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += c(i, j);
    pot.gamma = std::max(pot.gamma, s);
  }
  return pot;
}

}  // namespace ctpt
