#include <benchmark/benchmark.h>

#include "ctpt/generators.hpp"
#include "ctpt/spectral.hpp"

namespace {

using namespace ctpt;

void BM_SymmetricEigen(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Market m = gen_random_db(n, n <= 16 ? 0.5 : 0.25, 13, 1.0);
  const Potentials pot = potentials(m);
  const Equilibrium eq = solve_equilibrium(m, pot);
  const Matrix ell = build_ell(m, eq);
  Matrix l_c = Matrix::identity(n) - ell;
  for (auto _ : state) {
    const EigenDecomposition eig = symmetric_eigen(l_c);
    benchmark::DoNotOptimize(eig.values.data());
  }
}
BENCHMARK(BM_SymmetricEigen)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_MarketLaplacianReport(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Market m = gen_random_db(n, 0.4, 17, 1.0);
  const Potentials pot = potentials(m);
  const Equilibrium eq = solve_equilibrium(m, pot);
  for (auto _ : state) {
    const SpectralReport report = market_laplacian(m, eq, pot);
    benchmark::DoNotOptimize(report.damping_rate);
  }
}
BENCHMARK(BM_MarketLaplacianReport)->Arg(8)->Arg(32);

}  // namespace
