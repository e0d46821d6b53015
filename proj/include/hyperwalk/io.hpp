#pragma once

// Serialization of results: CSV with '.' decimal separator and 17 significant
// digits (round-trip exact), JSON via nlohmann::json.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperwalk/flows.hpp"
#include "hyperwalk/pendulum.hpp"

namespace hyperwalk::io {

[[nodiscard]] std::string format_double(double value);

/// Header "n,t,re,im", one row per recorded sample.
void write_trajectory_csv(std::ostream& out, const flows::Trajectory& traj);

/// Header "a,lambda,T_measured,T_oracle,T_linear,abs_dev,rel_dev",
/// rows sorted by amplitude ascending.
void write_oscillation_csv(std::ostream& out, std::vector<pendulum::OscillationRow> rows);

/// Header "t,envelope".
void write_gronwall_csv(std::ostream& out, const std::vector<std::pair<double, double>>& table);

[[nodiscard]] nlohmann::json fit_to_json(const flows::PowerLawFit& fit);
[[nodiscard]] nlohmann::json adequality_report_to_json(const flows::AdequalityReport& report);

}  // namespace hyperwalk::io
