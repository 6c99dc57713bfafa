#pragma once

#include "ctpt/linalg.hpp"

namespace ctpt {

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal; column k pairs with values[k]
};

/// Dense symmetric eigensolver: cyclic Jacobi with a deterministic
/// row-major sweep order. Iterates until the off-diagonal Frobenius mass
/// drops below 1e-13 * ||A||_F, so results are reproducible run to run.
EigenDecomposition symmetric_eigen(const Matrix& a);

}  // namespace ctpt
