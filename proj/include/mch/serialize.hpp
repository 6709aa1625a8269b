#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "mch/pde.hpp"
#include "mch/profile.hpp"
#include "mch/weakform.hpp"

namespace mch::serialize {

inline constexpr const char* schema_version = "mch/1";

nlohmann::json params_to_json(const WaveParameters& params);
WaveParameters params_from_json(const nlohmann::json& j);

nlohmann::json category_to_json(const classify::WaveCategory& cat);

/// Full profile document (schema mch/1, kind "wave-profile").
nlohmann::json profile_to_json(const profile::WaveProfile& prof);
profile::WaveProfile profile_from_json(const nlohmann::json& j);

nlohmann::json tw_report_to_json(const weakform::TwReport& rep);

/// Two-column gnuplot-ready samples: "xi,phi".
void write_profile_csv(std::ostream& os, const profile::WaveProfile& prof);

/// Simulation trace rows: t, E, F, V, min u_x, xbar, rho.
void write_trace_header(std::ostream& os);
void write_trace_row(std::ostream& os, double t, const pde::InvariantTriple& inv, double min_ux,
                     double xbar, double rho);

/// Snapshot: header line with t/length/n, then "x,u" rows.
void write_snapshot(std::ostream& os, const pde::SimulationState& state);
pde::SimulationState read_snapshot(std::istream& is);

}  // namespace mch::serialize
