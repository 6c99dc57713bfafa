#pragma once

#include <string>

#include "ctpt/dynamics.hpp"
#include "ctpt/equilibrium.hpp"
#include "ctpt/error.hpp"
#include "ctpt/market.hpp"
#include "ctpt/noise.hpp"
#include "ctpt/spectral.hpp"

namespace ctpt {

/// Market documents carry {schema_version, delta, C} or, for the
/// pre-normalization form, {delta, c_raw, supplies}; when C is absent the
/// loader normalizes c_raw. Numbers round-trip exactly.
std::string market_to_json(const Market& m);
Market market_from_json(const std::string& text);

Market load_market(const std::string& path);
void save_market(const Market& m, const std::string& path);

std::string validation_to_json(const ValidationReport& report);
std::string equilibrium_to_json(const Equilibrium& eq, double tol);
std::string spectral_to_json(const SpectralReport& report);
std::string bounds_to_json(const ComparisonBounds& bounds, double slack);
std::string trajectory_to_json(const Trajectory& traj, double amplitude,
                               const std::string& direction, std::uint64_t seed,
                               double dt, double reference_rate);
std::string noise_to_json(const NoiseReport& report);
std::string error_to_json(const Error& error);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace ctpt
