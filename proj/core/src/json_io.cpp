#include "ctpt/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctpt/error.hpp"

namespace ctpt {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, const char* field) {
  if (!rows.is_array() || rows.empty())
    throw Error("io", "market_from_json", std::string(field) + " must be a nonempty array");
  const int n = static_cast<int>(rows.size());
  Matrix m(n, static_cast<int>(rows.front().size()));
  for (int i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != m.cols())
      throw Error("io", "market_from_json", std::string(field) + " rows have uneven length");
    for (int j = 0; j < m.cols(); ++j) m(i, j) = row[j].get<double>();
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json bound_pair_to_json(const BoundPair& pair, double damping, double slack) {
  return json{{"lower", pair.lower},
              {"upper", pair.upper},
              {"contains_damping_rate", pair.contains(damping, slack)}};
}

json parse(const std::string& text, const char* op) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error("io", op, "invalid JSON document");
  return doc;
}

}  // namespace

std::string market_to_json(const Market& m) {
  json doc{{"schema_version", kSchemaVersion}, {"delta", m.delta}, {"C", matrix_to_json(m.C)}};
  return doc.dump(2);
}

Market market_from_json(const std::string& text) {
  const json doc = parse(text, "market_from_json");
  if (!doc.contains("delta"))
    throw Error("io", "market_from_json", "missing field: delta");
  const double delta = doc["delta"].get<double>();

  if (doc.contains("C")) {
    Matrix c = matrix_from_json(doc["C"], "C");
    if (c.rows() != c.cols())
      throw Error("io", "market_from_json", "C must be square");
    return Market{c.rows(), delta, std::move(c)};
  }
  if (doc.contains("c_raw")) {
    const Matrix c_raw = matrix_from_json(doc["c_raw"], "c_raw");
    Vector supplies(c_raw.rows(), 1.0);
    if (doc.contains("supplies")) {
      supplies.clear();
      for (const auto& v : doc["supplies"]) supplies.push_back(v.get<double>());
    }
    return normalize_market(c_raw, supplies, delta);
  }
  throw Error("io", "market_from_json", "document has neither C nor c_raw");
}

Market load_market(const std::string& path) { return market_from_json(read_text(path)); }

void save_market(const Market& m, const std::string& path) {
  write_text(path, market_to_json(m));
}

std::string validation_to_json(const ValidationReport& report) {
  json conditions = json::array();
  for (const auto& c : report.conditions)
    conditions.push_back(json{{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}});
  json doc{{"schema_version", kSchemaVersion}, {"ok", report.ok}, {"conditions", conditions}};
  return doc.dump(2);
}

std::string equilibrium_to_json(const Equilibrium& eq, double tol) {
  json doc{{"schema_version", kSchemaVersion},
           {"r", vector_to_json(eq.r)},
           {"R", vector_to_json(eq.R)},
           {"clearing_residual", eq.clearing_residual},
           {"balance_residual", eq.balance_residual},
           {"iterations", eq.iterations},
           {"converged", eq.converged},
           {"tol", tol}};
  return doc.dump(2);
}

std::string spectral_to_json(const SpectralReport& report) {
  json doc{{"schema_version", kSchemaVersion},
           {"ell", matrix_to_json(report.ell)},
           {"B_diag", vector_to_json(report.B_diag)},
           {"L_C", matrix_to_json(report.L_C)},
           {"W", matrix_to_json(report.W)},
           {"eigenvalues", vector_to_json(report.eigenvalues)},
           {"eigenvectors", matrix_to_json(report.eigenvectors)},
           {"kernel_index", report.kernel_index},
           {"damping_rate", report.damping_rate}};
  doc["bounds"] = parse(bounds_to_json(report.bounds, 1e-8), "spectral_to_json");
  return doc.dump(2);
}

std::string bounds_to_json(const ComparisonBounds& bounds, double slack) {
  json doc{{"schema_version", kSchemaVersion},
           {"damping_rate", bounds.damping_rate},
           {"lambda2_market", bounds.lambda2_market},
           {"lambda2_unweighted", bounds.lambda2_unweighted},
           {"lambda2_prices", bounds.lambda2_prices},
           {"nu_unweighted", bounds.nu_unweighted},
           {"nu_prices", bounds.nu_prices},
           {"nu_unweighted_cap", bounds.nu_unweighted_cap},
           {"nu_prices_cap", bounds.nu_prices_cap},
           {"uniform", bounds.uniform},
           {"market", bound_pair_to_json(bounds.market, bounds.damping_rate, slack)},
           {"unweighted", bound_pair_to_json(bounds.unweighted, bounds.damping_rate, slack)},
           {"prices", bound_pair_to_json(bounds.prices, bounds.damping_rate, slack)}};
  return doc.dump(2);
}

std::string trajectory_to_json(const Trajectory& traj, double amplitude,
                               const std::string& direction, std::uint64_t seed,
                               double dt, double reference_rate) {
  json prices = json::array();
  for (const auto& p : traj.prices) prices.push_back(vector_to_json(p));
  json doc{{"schema_version", kSchemaVersion},
           {"amplitude", amplitude},
           {"direction", direction},
           {"seed", seed},
           {"dt", dt},
           {"times", vector_to_json(traj.times)},
           {"prices", prices},
           {"alpha_bar_B_norm", vector_to_json(traj.alpha_bar_b_norm)},
           {"fitted_rate", traj.fitted_rate},
           {"fit_first", traj.fit_first},
           {"fit_last", traj.fit_last},
           {"damping_rate_reference", reference_rate}};
  return doc.dump(2);
}

std::string noise_to_json(const NoiseReport& report) {
  json doc{{"schema_version", kSchemaVersion},
           {"kappa", report.kappa},
           {"dt", report.dt},
           {"horizon", report.horizon},
           {"burn_in", report.burn_in},
           {"seed", report.seed},
           {"trials", report.trials},
           {"mode_lambdas", vector_to_json(report.mode_lambdas)},
           {"predicted_var", vector_to_json(report.predicted_var)},
           {"empirical_var", vector_to_json(report.empirical_var)},
           {"rel_error", vector_to_json(report.rel_error)},
           {"cross_covariance", matrix_to_json(report.cross_covariance)},
           {"slow_mode_skewness", report.slow_mode_skewness},
           {"slow_mode_excess_kurtosis", report.slow_mode_excess_kurtosis},
           {"effective_samples", report.effective_samples},
           {"predicted_alpha_std", vector_to_json(report.predicted_alpha_std)},
           {"histogram", matrix_to_json(report.histogram)}};
  return doc.dump(2);
}

std::string error_to_json(const Error& error) {
  json doc{{"error", json{{"module", error.module()},
                          {"operation", error.operation()},
                          {"message", error.message()},
                          {"witness", error.witness()}}}};
  return doc.dump(2);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("io", "write_text", "cannot open file for writing", path);
  out << text << '\n';
  if (!out) throw Error("io", "write_text", "write failed", path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "read_text", "cannot open file", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace ctpt
