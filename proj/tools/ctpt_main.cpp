// ctpt: equilibrium, spectral, and noise analysis of CES exchange markets
// under continuous-time proportional price adjustment.
//
// Exit codes: 0 success, 1 precondition or validation failure (a machine
// readable error object is printed), 2 I/O failure.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ctpt/dynamics.hpp"
#include "ctpt/eigen.hpp"
#include "ctpt/equilibrium.hpp"
#include "ctpt/error.hpp"
#include "ctpt/generators.hpp"
#include "ctpt/json_io.hpp"
#include "ctpt/market.hpp"
#include "ctpt/noise.hpp"
#include "ctpt/spectral.hpp"

namespace {

using namespace ctpt;

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty())
    std::cout << text << '\n';
  else
    write_text(output_path, text);
}

Market load_validated_market(const std::string& path, const char* op) {
  Market m = load_market(path);
  const ValidationReport report = validate(m);
  if (!report.ok) {
    for (const auto& c : report.conditions)
      if (!c.passed)
        throw Error("cli", op, "market failed validation: " + c.name, c.witness);
  }
  return m;
}

struct Analysis {
  Market m;
  Potentials pot;
  Equilibrium eq;
};

Analysis analyze_market(const std::string& path, double tol, const char* op) {
  Analysis a{load_validated_market(path, op), {}, {}};
  a.pot = potentials(a.m);
  SolveOptions opts;
  opts.tol = tol;
  a.eq = solve_equilibrium(a.m, a.pot, opts);
  if (!a.eq.converged) {
    std::ostringstream witness;
    witness << "iterations " << a.eq.iterations << ", clearing residual "
            << a.eq.clearing_residual;
    throw Error("cli", op, "equilibrium solver did not converge", witness.str());
  }
  return a;
}

std::string eigenvalues_csv(const Vector& values) {
  std::ostringstream os;
  os.precision(17);
  os << "index,eigenvalue\n";
  for (size_t k = 0; k < values.size(); ++k) os << k << "," << values[k] << "\n";
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os.precision(17);
  os << "t,alpha_bar_B_norm\n";
  for (size_t i = 0; i < traj.times.size(); ++i)
    os << traj.times[i] << "," << traj.alpha_bar_b_norm[i] << "\n";
  return os.str();
}

std::string histogram_csv(const NoiseReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "mode,bin_center,count\n";
  for (int mode = 0; mode < report.histogram.rows(); ++mode)
    for (int bin = 0; bin < report.histogram.cols(); ++bin)
      os << mode << "," << noise_histogram_center(report.predicted_var[mode], bin)
         << "," << report.histogram(mode, bin) << "\n";
  return os.str();
}

int run(int argc, char** argv) {
  CLI::App app{"CES market laboratory: tatonnement dynamics and market Laplacians"};
  app.require_subcommand(1);

  std::string input, output, csv_path;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::string format = "json";

  const auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input)
      cmd->add_option("--input,-i", input, "market JSON file")->required();
    cmd->add_option("--output,-o", output, "write the report here (default stdout)");
    cmd->add_option("--tol", tol, "solver tolerance on log prices")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  auto* cmd_validate = app.add_subcommand("validate", "check market conditions");
  add_common(cmd_validate, true);

  auto* cmd_generate = app.add_subcommand("generate", "write an example market");
  std::string kind;
  int gen_n = 6, half_degree = 1;
  bool self_loop = false;
  double gen_a = 2.0, gen_A = 2.0, density = 0.5, delta = 1.0, tight_x = 1.0,
         tight_nu = 1.0;
  cmd_generate->add_option("--kind", kind, "generator")
      ->required()
      ->check(CLI::IsMember({"uniform_circulant", "price_chain", "exp_gap_chain",
                             "random_db", "tightness_pair"}));
  cmd_generate->add_option("--n", gen_n, "size parameter");
  cmd_generate->add_option("--half-degree", half_degree, "circulant half degree");
  cmd_generate->add_flag("--self-loop", self_loop, "add self-loops (circulant)");
  cmd_generate->add_option("--a", gen_a, "price chain ratio (> 1)");
  cmd_generate->add_option("--A", gen_A, "exponential-gap price base (> 1)");
  cmd_generate->add_option("--density", density, "random market edge density");
  cmd_generate->add_option("--delta", delta, "elasticity parameter");
  cmd_generate->add_option("--seed", seed, "random market seed");
  cmd_generate->add_option("--x", tight_x, "tightness pair outer weight");
  cmd_generate->add_option("--nu0", tight_nu, "tightness pair distortion");
  add_common(cmd_generate, false);

  auto* cmd_solve = app.add_subcommand("solve", "compute equilibrium prices");
  int max_iter = 0;
  cmd_solve->add_option("--max-iter", max_iter, "iteration cap (0 = automatic)");
  add_common(cmd_solve, true);

  auto* cmd_spectrum = app.add_subcommand("spectrum", "market Laplacian eigensystem");
  cmd_spectrum->add_option("--csv", csv_path, "also dump eigenvalues as CSV");
  add_common(cmd_spectrum, true);

  auto* cmd_bounds = app.add_subcommand("bounds", "two-sided damping-rate bounds");
  add_common(cmd_bounds, true);

  auto* cmd_simulate = app.add_subcommand("simulate", "integrate the adjustment ODE");
  double amplitude = 1e-3, horizon = 0.0, dt = 0.0;
  int stride = 1;
  std::string mode = "random";
  cmd_simulate->add_option("--amplitude", amplitude, "initial sup-norm of log prices")
      ->check(CLI::PositiveNumber);
  cmd_simulate->add_option("--mode", mode,
                           "eigenmode index (1 = damping mode) or 'random'");
  cmd_simulate->add_option("--seed", seed, "seed for the random direction");
  cmd_simulate->add_option("--horizon", horizon, "integration time (0 = automatic)");
  cmd_simulate->add_option("--dt", dt, "step size (0 = automatic)");
  cmd_simulate->add_option("--stride", stride, "record every k-th step")
      ->check(CLI::PositiveNumber);
  cmd_simulate->add_option("--csv", csv_path, "also dump (t, norm) as CSV");
  add_common(cmd_simulate, true);

  auto* cmd_noise = app.add_subcommand("noise", "stationary statistics under noise");
  double kappa = std::sqrt(2.0), noise_horizon = 0.0, noise_dt = 0.0;
  int trials = 1;
  cmd_noise->add_option("--kappa", kappa, "noise intensity")->check(CLI::PositiveNumber);
  cmd_noise->add_option("--horizon", noise_horizon, "measurement time (0 = automatic)");
  cmd_noise->add_option("--dt", noise_dt, "step size (0 = automatic)");
  cmd_noise->add_option("--seed", seed, "random seed");
  cmd_noise->add_option("--trials", trials, "independent trials to average")
      ->check(CLI::PositiveNumber);
  cmd_noise->add_option("--csv", csv_path, "also dump per-mode histograms as CSV");
  add_common(cmd_noise, true);

  CLI11_PARSE(app, argc, argv);

  if (cmd_validate->parsed()) {
    const Market m = load_market(input);
    const ValidationReport report = validate(m);
    emit(validation_to_json(report), output);
    for (const auto& c : report.conditions)
      if (!c.passed) {
        std::cerr << error_to_json(Error("market", "validate",
                                         "condition failed: " + c.name, c.witness))
                  << '\n';
        return 1;
      }
    return 0;
  }

  if (cmd_generate->parsed()) {
    if (kind == "tightness_pair") {
      const AdjacencyPair pair = gen_tightness_pair(tight_x, tight_nu);
      std::ostringstream os;
      os.precision(17);
      os << "{\n  \"schema_version\": 1,\n  \"nu\": " << tight_nu << ",\n";
      const auto dump = [&os](const char* name, const Matrix& w) {
        os << "  \"" << name << "\": [";
        for (int i = 0; i < w.rows(); ++i) {
          os << (i ? ", [" : "[");
          for (int j = 0; j < w.cols(); ++j) os << (j ? ", " : "") << w(i, j);
          os << "]";
        }
        os << "]";
      };
      dump("W", pair.W);
      os << ",\n";
      dump("W_tilde", pair.W_tilde);
      os << "\n}";
      emit(os.str(), output);
      return 0;
    }
    Market m;
    if (kind == "uniform_circulant")
      m = gen_uniform_circulant(gen_n, half_degree, self_loop);
    else if (kind == "price_chain")
      m = gen_price_chain(gen_n, gen_a, delta);
    else if (kind == "exp_gap_chain")
      m = gen_exp_gap_chain(gen_n, gen_A);
    else
      m = gen_random_db(gen_n, density, seed, delta);
    emit(market_to_json(m), output);
    return 0;
  }

  if (cmd_solve->parsed()) {
    const Market m = load_validated_market(input, "solve");
    const Potentials pot = potentials(m);
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    const Equilibrium eq = solve_equilibrium(m, pot, opts);
    emit(equilibrium_to_json(eq, tol), output);
    if (!eq.converged) {
      std::cerr << error_to_json(Error("equilibrium", "solve_equilibrium",
                                       "solver did not converge"))
                << '\n';
      return 1;
    }
    return 0;
  }

  if (cmd_spectrum->parsed()) {
    const Analysis a = analyze_market(input, tol, "spectrum");
    const SpectralReport report = market_laplacian(a.m, a.eq, a.pot);
    emit(spectral_to_json(report), output);
    if (!csv_path.empty()) write_text(csv_path, eigenvalues_csv(report.eigenvalues));
    return 0;
  }

  if (cmd_bounds->parsed()) {
    const Analysis a = analyze_market(input, tol, "bounds");
    const SpectralReport report = market_laplacian(a.m, a.eq, a.pot);
    emit(bounds_to_json(report.bounds, 1e-8), output);
    const double slack = 1e-8;
    if (!report.bounds.market.contains(report.damping_rate, slack) ||
        !report.bounds.unweighted.contains(report.damping_rate, slack) ||
        !report.bounds.prices.contains(report.damping_rate, slack))
      throw Error("cli", "bounds", "damping rate escaped a bound sandwich");
    return 0;
  }

  if (cmd_simulate->parsed()) {
    const Analysis a = analyze_market(input, tol, "simulate");
    const DynamicsKernel kernel = build_D_analytic(a.m, a.eq);
    const EigenDecomposition eig = symmetric_eigen(symmetrize(kernel.symmetrized));
    const double fastest = std::abs(eig.values[0]);
    const double damping = eig.values[a.m.n - 2];

    Vector alpha0(a.m.n);
    if (mode == "random") {
      std::mt19937_64 rng(seed);
      for (double& v : alpha0)
        v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    } else {
      alpha0 = mode_direction(kernel, std::stoi(mode));
    }
    const double scale = norm_inf(alpha0);
    for (double& v : alpha0) v *= amplitude / scale;

    SimulateOptions opts;
    opts.dt = dt > 0.0 ? dt : 0.01 / fastest;
    opts.horizon = horizon > 0.0 ? horizon : std::log(1e12) / std::abs(damping);
    opts.record_stride = stride;
    const Trajectory traj = simulate_ctpt(a.m, a.eq, alpha0, opts);
    emit(trajectory_to_json(traj, amplitude, mode, seed, opts.dt, damping), output);
    if (!csv_path.empty()) write_text(csv_path, trajectory_csv(traj));
    return 0;
  }

  if (cmd_noise->parsed()) {
    const Analysis a = analyze_market(input, tol, "noise");
    const DynamicsKernel kernel = build_D_analytic(a.m, a.eq);
    const EigenDecomposition eig = symmetric_eigen(symmetrize(kernel.symmetrized));
    const double fastest = std::abs(eig.values[0]);
    const double slowest = std::abs(eig.values[a.m.n - 2]);

    NoiseOptions opts;
    opts.kappa = kappa;
    opts.dt = noise_dt > 0.0 ? noise_dt : 0.01 / fastest;
    opts.horizon = noise_horizon > 0.0 ? noise_horizon : 2000.0 / slowest;
    opts.seed = seed;
    opts.trials = trials;
    const NoiseReport report = simulate_ou(a.m, a.eq, kernel, opts);
    emit(noise_to_json(report), output);
    if (!csv_path.empty()) write_text(csv_path, histogram_csv(report));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cout << error_to_json(e) << std::endl;
    return e.module() == "io" ? 2 : 1;
  } catch (const std::exception& e) {
    std::cout << error_to_json(Error("cli", "dispatch", e.what())) << std::endl;
    return 1;
  }
}
