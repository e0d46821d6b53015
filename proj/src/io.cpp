#include "hyperwalk/io.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace hyperwalk::io {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return std::string(buf);
}

void write_trajectory_csv(std::ostream& out, const flows::Trajectory& traj) {
    out << "n,t,re,im\n";
    for (const auto& s : traj.samples) {
        out << s.n << ',' << format_double(s.t) << ',' << format_double(s.z.real()) << ','
            << format_double(s.z.imag()) << '\n';
    }
}

void write_oscillation_csv(std::ostream& out, std::vector<pendulum::OscillationRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.amplitude < b.amplitude; });
    out << "a,lambda,T_measured,T_oracle,T_linear,abs_dev,rel_dev\n";
    for (const auto& r : rows) {
        out << format_double(r.amplitude) << ',' << format_double(r.mesh) << ','
            << format_double(r.period_measured) << ',' << format_double(r.period_oracle) << ','
            << format_double(r.period_linear) << ',' << format_double(r.abs_dev) << ','
            << format_double(r.rel_dev) << '\n';
    }
}

void write_gronwall_csv(std::ostream& out, const std::vector<std::pair<double, double>>& table) {
    out << "t,envelope\n";
    for (const auto& [t, bound] : table) {
        out << format_double(t) << ',' << format_double(bound) << '\n';
    }
}

nlohmann::json fit_to_json(const flows::PowerLawFit& fit) {
    nlohmann::json j;
    j["exponent"] = fit.exponent;
    j["prefactor"] = fit.prefactor;
    j["residual"] = fit.residual;
    j["points_used"] = fit.points_used;
    if (!fit.note.empty()) j["note"] = fit.note;
    return j;
}

nlohmann::json adequality_report_to_json(const flows::AdequalityReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    // Rows sorted ascending in the scale parameter.
    std::vector<std::size_t> order(report.scales.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return report.scales[a] < report.scales[b];
    });
    for (std::size_t i : order) {
        rows.push_back({{"scale", report.scales[i]},
                        {"sup_abs", report.sup_abs[i]},
                        {"sup_rel", report.sup_rel[i]}});
    }

    nlohmann::json j;
    j["scale_name"] = report.scale_name;
    j["rows"] = rows;
    if (report.fit) {
        j["fit"] = fit_to_json(*report.fit);
        j["fit"]["verdict"] = flows::to_string(report.verdict);
    } else {
        j["fit"] = {{"verdict", flows::to_string(report.verdict)}};
    }
    return j;
}

}  // namespace hyperwalk::io
