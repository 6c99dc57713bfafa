#include <benchmark/benchmark.h>

#include "ctpt/equilibrium.hpp"
#include "ctpt/generators.hpp"

namespace {

using namespace ctpt;

void BM_SolveEquilibrium(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Market m = gen_random_db(n, n <= 16 ? 0.5 : 0.25, 7, 1.0);
  const Potentials pot = potentials(m);
  for (auto _ : state) {
    const Equilibrium eq = solve_equilibrium(m, pot);
    benchmark::DoNotOptimize(eq.r.data());
  }
  state.counters["iterations"] = static_cast<double>(solve_equilibrium(m, pot).iterations);
}
BENCHMARK(BM_SolveEquilibrium)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_DetailedBalanceResidual(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Market m = gen_random_db(n, 0.4, 11, 1.0);
  const Equilibrium eq = solve_equilibrium(m, potentials(m));
  for (auto _ : state)
    benchmark::DoNotOptimize(detailed_balance_residual(m, eq.r));
}
BENCHMARK(BM_DetailedBalanceResidual)->Arg(16)->Arg(64);

}  // namespace
