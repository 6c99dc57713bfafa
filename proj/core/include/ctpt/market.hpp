#pragma once

#include <string>
#include <vector>

#include "ctpt/linalg.hpp"

namespace ctpt {

/// An exchange market with CES preferences in the gross-substitutes regime.
/// C holds the utility coefficients after supply rescaling, exponentiation
/// by delta, and row normalization (min nonzero entry of every row is 1).
/// Participant i and good i coincide; C_ij > 0 means i wants good j.
struct Market {
  int n = 0;
  double delta = 1.0;  // rho / (1 - rho), in (0, inf)
  Matrix C;

  bool edge(int i, int j) const { return C(i, j) > 0.0; }
};

/// Node potentials derived from coefficient-ratio path products.
/// psi is normalized so its minimum entry, attained at base_vertex, is 1;
/// psi_tilde = max psi measures global price disparity and gamma, the
/// largest coefficient row sum, measures local utility diversity.
struct Potentials {
  Vector psi;
  double psi_tilde = 1.0;
  double gamma = 1.0;
  int base_vertex = 0;
};

struct ConditionCheck {
  std::string name;
  bool passed = false;
  std::string witness;  // empty when passed
};

struct ValidationReport {
  bool ok = false;
  std::vector<ConditionCheck> conditions;

  const ConditionCheck* find(const std::string& name) const;
};

/// Builds a Market from raw CES coefficients and supplies:
/// C_ij = (c_raw_ij * s_j)^delta, then each row is rescaled so its minimum
/// nonzero entry is 1. Throws Error naming the first violated condition.
Market normalize_market(const Matrix& c_raw, const Vector& supplies, double delta);

/// Rescales every row of C by a positive multiplier so its minimum nonzero
/// entry becomes 1. Rows already normalized are returned bit for bit.
Matrix normalize_rows(const Matrix& c);

/// Checks nonnegativity, weak undirectedness, connectedness, the
/// circulation-free condition, and row normalization. Never throws;
/// failures carry witnesses (an edge, a cycle with both products, a row).
ValidationReport validate(const Market& m);

/// Path-product potentials along a BFS spanning tree, renormalized so
/// min psi = 1. Consistency on non-tree edges is verified against
/// psi_i C_ij = psi_j C_ji to relative 1e-9; a violation throws with the
/// offending edge.
Potentials potentials(const Market& m);

}  // namespace ctpt
