#include <doctest.h>

#include <random>

#include "ctpt/eigen.hpp"
#include "ctpt/error.hpp"
#include "ctpt/linalg.hpp"

using namespace ctpt;

TEST_CASE("matrix product and transpose") {
  Matrix a(2, 3);
  a(0, 0) = 1.0; a(0, 1) = 2.0; a(0, 2) = 3.0;
  a(1, 0) = 4.0; a(1, 1) = 5.0; a(1, 2) = 6.0;
  const Matrix at = transpose(a);
  const Matrix g = a * at;
  CHECK(g(0, 0) == doctest::Approx(14.0));
  CHECK(g(0, 1) == doctest::Approx(32.0));
  CHECK(g(1, 1) == doctest::Approx(77.0));
  CHECK(max_asymmetry(g) == 0.0);
}

TEST_CASE("geometric mean") {
  CHECK(geometric_mean({2.0, 8.0}) == doctest::Approx(4.0));
  CHECK(geometric_mean({1.0, 1.0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("symmetric eigensolver reproduces known spectra") {
  Matrix a(2, 2);
  a(0, 0) = 2.0; a(0, 1) = 1.0;
  a(1, 0) = 1.0; a(1, 1) = 2.0;
  const EigenDecomposition eig = symmetric_eigen(a);
  CHECK(eig.values[0] == doctest::Approx(1.0));
  CHECK(eig.values[1] == doctest::Approx(3.0));
}

TEST_CASE("symmetric eigensolver residuals and orthonormality on random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int n : {3, 8, 17}) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) a(i, j) = a(j, i) = unit(rng);
    const EigenDecomposition eig = symmetric_eigen(a);
    for (int k = 0; k < n; ++k) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v[i] = eig.vectors(i, k);
      Vector av = matvec(a, v);
      for (int i = 0; i < n; ++i) av[i] -= eig.values[k] * v[i];
      CHECK(norm_inf(av) < 1e-12);
    }
    const Matrix gram = transpose(eig.vectors) * eig.vectors;
    CHECK(max_abs_diff(gram, Matrix::identity(n)) < 1e-12);
    for (int k = 1; k < n; ++k) CHECK(eig.values[k - 1] <= eig.values[k]);
  }
}

TEST_CASE("symmetric eigensolver rejects asymmetric input") {
  Matrix a(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS((void)symmetric_eigen(a), Error);
}
