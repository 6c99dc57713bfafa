#include <benchmark/benchmark.h>

#include <cmath>

#include "ctpt/dynamics.hpp"
#include "ctpt/generators.hpp"
#include "ctpt/noise.hpp"

namespace {

using namespace ctpt;

void BM_SimulateAdjustment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Market m = gen_random_db(n, 0.5, 19, 1.0);
  const Equilibrium eq = solve_equilibrium(m, potentials(m));
  const DynamicsKernel kernel = build_D_analytic(m, eq);
  Vector alpha0 = mode_direction(kernel, 1);
  for (double& v : alpha0) v *= 1e-3;
  SimulateOptions opts;
  opts.dt = 1e-3;
  opts.horizon = 1.0;
  for (auto _ : state) {
    const Trajectory traj = simulate_ctpt(m, eq, alpha0, opts);
    benchmark::DoNotOptimize(traj.fitted_rate);
  }
  state.SetItemsProcessed(state.iterations() * 1000);  // steps per run
}
BENCHMARK(BM_SimulateAdjustment)->Arg(8)->Arg(32);

void BM_NoiseSteps(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Market m = gen_random_db(n, 0.5, 23, 1.0);
  const Equilibrium eq = solve_equilibrium(m, potentials(m));
  const DynamicsKernel kernel = build_D_analytic(m, eq);
  const EigenDecomposition eig = symmetric_eigen(symmetrize(kernel.symmetrized));
  NoiseOptions opts;
  opts.dt = 0.01 / std::abs(eig.values[0]);
  opts.horizon = 60.0 / std::abs(eig.values[n - 2]);
  opts.seed = 1;
  for (auto _ : state) {
    const NoiseReport report = simulate_ou(m, eq, kernel, opts);
    benchmark::DoNotOptimize(report.empirical_var.data());
  }
  state.SetItemsProcessed(
      state.iterations() *
      static_cast<long>((opts.horizon + 10.0 / std::abs(eig.values[n - 2])) / opts.dt));
}
BENCHMARK(BM_NoiseSteps)->Arg(8)->Arg(16);

}  // namespace
