// Command-line front end. Subcommands:
//
//   walk      one trajectory as CSV (n,t,re,im)
//   compare   lockstep deviation sweep for a field pair, with Gronwall
//             envelope checks and a power-law fit (JSON)
//   period    amplitude sweep of measured periods (CSV pair + JSON summary)
//   series    truncated-series demos: linearization ratio, identities
//   gronwall  envelope table for given eta, K (CSV)
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
// 4 inconclusive verdict under --strict.

#include <algorithm>
#include <complex>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperwalk/asymptotic.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/flows.hpp"
#include "hyperwalk/io.hpp"
#include "hyperwalk/pendulum.hpp"

namespace {

using hyperwalk::NumericalError;
using hyperwalk::asymptotic::AsymptoticNumber;
using hyperwalk::flows::Complex;
using hyperwalk::flows::PrevectorField;
using json = nlohmann::json;
namespace flows = hyperwalk::flows;
namespace pendulum = hyperwalk::pendulum;
namespace io = hyperwalk::io;

constexpr int kExitInconclusive = 4;

/// Thrown when --strict is set and a verdict is inconclusive.
struct InconclusiveVerdict : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
}

struct PendulumOpts {
    double gravity = 1.0;
    double length = 1.0;
    double amplitude = 0.1;

    [[nodiscard]] pendulum::PendulumParams params() const {
        return pendulum::PendulumParams{gravity, length, amplitude};
    }
};

void add_pendulum_opts(CLI::App* cmd, PendulumOpts& opts) {
    cmd->add_option("--g", opts.gravity, "gravity [length/time^2]")->capture_default_str();
    cmd->add_option("--ell", opts.length, "rod length [length]")->capture_default_str();
    cmd->add_option("-a,--amplitude", opts.amplitude, "release angle [rad]")
        ->capture_default_str();
}

PrevectorField field_by_name(const std::string& name, const PendulumOpts& opts, double mesh) {
    if (name == "zero") {
        return PrevectorField::from_field(
            flows::VectorField{[](const Complex&) { return Complex{}; }, 0.0, 0.0}, mesh);
    }
    const auto fields = pendulum::make_fields(opts.params(), mesh);
    if (name == "nonlinear" || name == "f") return fields.nonlinear;
    if (name == "linearized" || name == "e") return fields.linearized;
    if (name == "rotation" || name == "h") return fields.rotation;
    throw std::invalid_argument("unknown field: " + name);
}

// ---------------------------------------------------------------------------
// walk
// ---------------------------------------------------------------------------

struct WalkOpts {
    PendulumOpts pend;
    std::string field = "nonlinear";
    double mesh = 1e-3;
    std::int64_t n_per_period = 0;  // when set, overrides --lambda
    double t_final = 10.0;
    std::int64_t record_stride = 0;
    std::vector<double> z0;  // optional re im override of (amplitude, 0)
    std::string out = "-";
};

int run_walk(const WalkOpts& opts) {
    double mesh = opts.mesh;
    if (opts.n_per_period > 0)
        mesh = pendulum::choose_lambda(opts.pend.params().omega(), opts.n_per_period);
    if (!(mesh > 0.0)) throw std::invalid_argument("mesh must be positive");
    if (!(opts.t_final >= 0.0)) throw std::invalid_argument("t-final must be non-negative");

    Complex z0(opts.pend.amplitude, 0.0);
    if (!opts.z0.empty()) {
        if (opts.z0.size() != 2) throw std::invalid_argument("--z0 needs exactly re im");
        z0 = Complex(opts.z0[0], opts.z0[1]);
    }

    const PrevectorField field = field_by_name(opts.field, opts.pend, mesh);
    const std::int64_t steps = flows::steps_for_horizon(opts.t_final, mesh);
    const flows::Trajectory traj = flows::walk(field, z0, steps, opts.record_stride);
    if (traj.terminated_early) {
        std::cerr << "walk terminated early: " << traj.termination_reason << "\n";
        return 3;  // no output file written
    }

    std::ostringstream csv;
    io::write_trajectory_csv(csv, traj);
    write_output(opts.out, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareOpts {
    PendulumOpts pend;
    std::string pair = "linearized-rotation";
    std::string sweep = "lambda";
    std::vector<double> lambdas{1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<double> amplitudes{0.2, 0.1, 0.05, 0.025};
    double fixed_lambda = 1e-5;
    double t_final = 10.0;
    double lipschitz = 0.0;    // 0: use omega
    double eta_radius = 0.0;   // 0: max(1, 1.5 * amplitude)
    std::string out = "-";
    bool strict = false;
};

std::pair<PrevectorField, PrevectorField> field_pair(const std::string& pair,
                                                     const PendulumOpts& opts, double mesh) {
    const auto fields = pendulum::make_fields(opts.params(), mesh);
    if (pair == "nonlinear-linearized") return {fields.nonlinear, fields.linearized};
    if (pair == "linearized-rotation") return {fields.linearized, fields.rotation};
    if (pair == "nonlinear-rotation") return {fields.nonlinear, fields.rotation};
    throw std::invalid_argument("unknown field pair: " + pair);
}

int run_compare(const CompareOpts& opts) {
    opts.pend.params().validate();
    const double omega = opts.pend.params().omega();
    const double lipschitz = opts.lipschitz > 0.0 ? opts.lipschitz : omega;

    struct Row {
        double scale, sup_abs, sup_rel, eta, envelope;
        bool envelope_ok, radius_ok;
    };
    std::vector<Row> rows;
    std::vector<double> scales, sup_abs, sup_rel;
    std::size_t violations = 0;

    auto run_pair = [&](double scale, double mesh, double amplitude) {
        PendulumOpts row_opts = opts.pend;
        row_opts.amplitude = amplitude;
        const double radius =
            opts.eta_radius > 0.0 ? opts.eta_radius : std::max(1.0, 1.5 * amplitude);
        auto [f, g] = field_pair(opts.pair, row_opts, mesh);
        const auto dev = flows::walk_deviation(f, g, Complex(amplitude, 0.0), opts.t_final);
        if (dev.truncated)
            throw NumericalError("deviation sweep truncated at scale " +
                                 io::format_double(scale) + ": " + dev.reason);
        const double eta = flows::measure_discrepancy_rate(f, g, radius);
        bool ok = true;
        for (const auto& s : dev.samples) {
            if (s.deviation > flows::gronwall_envelope(eta, lipschitz, s.t)) {
                ok = false;
                ++violations;
                break;
            }
        }
        rows.push_back({scale, dev.sup_abs, dev.sup_rel, eta,
                        flows::gronwall_envelope(eta, lipschitz, opts.t_final), ok,
                        dev.max_norm <= radius});
        scales.push_back(scale);
        sup_abs.push_back(dev.sup_abs);
        sup_rel.push_back(dev.sup_rel);
    };

    if (opts.sweep == "lambda") {
        auto lambdas = opts.lambdas;
        std::sort(lambdas.rbegin(), lambdas.rend());
        for (double mesh : lambdas) run_pair(mesh, mesh, opts.pend.amplitude);
    } else if (opts.sweep == "amplitude") {
        auto amps = opts.amplitudes;
        std::sort(amps.rbegin(), amps.rend());
        for (double a : amps) run_pair(a, opts.fixed_lambda, a);
    } else {
        throw std::invalid_argument("unknown sweep kind: " + opts.sweep);
    }

    const auto report = flows::make_adequality_report(opts.sweep, scales, sup_abs, sup_rel);

    json doc = io::adequality_report_to_json(report);
    // Reattach the Gronwall columns to the sorted rows.
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.scale < b.scale;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        doc["rows"][i]["eta"] = rows[i].eta;
        doc["rows"][i]["envelope"] = rows[i].envelope;
        doc["rows"][i]["envelope_ok"] = rows[i].envelope_ok;
        doc["rows"][i]["eta_radius_covers_walk"] = rows[i].radius_ok;
    }
    doc["pair"] = opts.pair;
    doc["lipschitz"] = lipschitz;
    doc["t_final"] = opts.t_final;
    doc["gronwall_violations"] = violations;

    write_output(opts.out, doc.dump(2) + "\n");

    if (opts.strict && report.verdict == flows::AdequalityReport::Verdict::inconclusive)
        throw InconclusiveVerdict("deviation sweep verdict inconclusive");
    return 0;
}

// ---------------------------------------------------------------------------
// period
// ---------------------------------------------------------------------------

struct PeriodOpts {
    PendulumOpts pend;
    std::vector<double> amplitudes{0.4, 0.2, 0.1, 0.05, 0.025};
    std::int64_t n_per_period = 10000;
    int richardson_levels = 3;
    double periods = 8.0;
    std::string out = "period";
    bool strict = false;
};

int run_period(const PeriodOpts& opts) {
    auto amplitudes = opts.amplitudes;
    std::sort(amplitudes.rbegin(), amplitudes.rend());

    pendulum::LambdaPolicy policy;
    policy.n_per_period = opts.n_per_period;
    policy.richardson_levels = opts.richardson_levels;
    policy.periods_to_walk = opts.periods;

    const auto report = pendulum::small_oscillation_report(amplitudes, opts.pend.params(), policy);

    std::ostringstream f_csv, h_csv;
    io::write_oscillation_csv(f_csv, report.nonlinear_rows);
    io::write_oscillation_csv(h_csv, report.rotation_rows);

    json summary;
    summary["fit_exponent"] = report.deviation_fit.exponent;
    summary["fit_residual"] = report.deviation_fit.residual;
    summary["verdict"] = report.verdict;
    summary["nonlinear_vs_linearized"] =
        io::adequality_report_to_json(report.nonlinear_vs_linearized);
    summary["linearized_vs_rotation"] =
        io::adequality_report_to_json(report.linearized_vs_rotation);

    write_output(opts.out + "_f.csv", f_csv.str());
    write_output(opts.out + "_h.csv", h_csv.str());
    write_output(opts.out + "_summary.json", summary.dump(2) + "\n");

    if (opts.strict && report.verdict == "inconclusive")
        throw InconclusiveVerdict("period sweep verdict inconclusive");
    return 0;
}

// ---------------------------------------------------------------------------
// series
// ---------------------------------------------------------------------------

struct SeriesOpts {
    int truncation = hyperwalk::asymptotic::kDefaultTruncationOrder;
    std::vector<double> z_re{1.0};
    std::vector<double> z_im{0.0};
    int samples = 100;
    std::uint32_t seed = 12345;
    std::string format = "text";
    std::string out = "-";
    bool strict = false;
};

int run_series(const SeriesOpts& opts) {
    if (opts.truncation < 2) throw std::invalid_argument("truncation order must be >= 2");
    if (opts.z_re.size() != opts.z_im.size())
        throw std::invalid_argument("--z-re and --z-im need the same number of values");
    if (opts.samples < 1) throw std::invalid_argument("need at least one identity sample");

    std::vector<Complex> z_samples;
    for (std::size_t i = 0; i < opts.z_re.size(); ++i)
        z_samples.emplace_back(opts.z_re[i], opts.z_im[i]);

    const auto report = pendulum::rescaled_adequality_check(z_samples, opts.truncation);

    // Transfer spot-check: sin^2 + cos^2 = 1 on random finite inputs.
    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double max_residual = 0.0;
    for (int trial = 0; trial < opts.samples; ++trial) {
        std::vector<Complex> coeffs(static_cast<std::size_t>(opts.truncation) + 1);
        for (auto& c : coeffs) c = Complex(unit(rng), unit(rng));
        const auto s = AsymptoticNumber::from_coefficients(0, std::move(coeffs), opts.truncation);
        const auto residual = hyperwalk::asymptotic::sin(s) * hyperwalk::asymptotic::sin(s) +
                              hyperwalk::asymptotic::cos(s) * hyperwalk::asymptotic::cos(s) -
                              AsymptoticNumber::constant(1.0, opts.truncation);
        if (!residual.is_zero()) {
            for (int o = residual.leading_order();
                 o <= residual.leading_order() + opts.truncation; ++o) {
                max_residual = std::max(max_residual, std::abs(residual.coefficient(o)));
            }
        }
    }

    // Appreciable-amplitude contrast: a = 1 instead of eps.
    const auto one = AsymptoticNumber::constant(1.0, opts.truncation);
    const auto appreciable = pendulum::linearization_ratio(Complex(1.0, 0.0), one);
    const bool appreciable_adequal = hyperwalk::asymptotic::adequal(appreciable, one);

    std::ostringstream text;
    json doc;
    doc["truncation_order"] = opts.truncation;
    doc["rows"] = json::array();
    for (const auto& row : report.rows) {
        text << "ratio at Z=(" << io::format_double(row.z_sample.real()) << ","
             << io::format_double(row.z_sample.imag()) << "): " << row.ratio.to_string() << "\n"
             << "  order-1 coefficient: " << io::format_double(std::abs(row.order1_coefficient))
             << "\n  order-2 coefficient: (" << io::format_double(row.order2_coefficient.real())
             << "," << io::format_double(row.order2_coefficient.imag()) << ")\n"
             << "  adequal to 1: " << (row.adequal_to_one ? "yes" : "no") << "\n";
        doc["rows"].push_back({{"z", {row.z_sample.real(), row.z_sample.imag()}},
                               {"series", row.ratio.to_string()},
                               {"order1_abs", std::abs(row.order1_coefficient)},
                               {"order2",
                                {row.order2_coefficient.real(), row.order2_coefficient.imag()}},
                               {"adequal_to_one", row.adequal_to_one}});
    }
    text << "sin^2+cos^2-1 max coefficient over " << opts.samples
         << " random inputs: " << io::format_double(max_residual) << "\n";
    text << "appreciable amplitude a=1 at Z=(1,0): ratio = "
         << appreciable.to_string() << " -> adequal to 1: "
         << (appreciable_adequal ? "yes" : "no") << "\n";
    doc["identity_max_residual"] = max_residual;
    doc["identity_samples"] = opts.samples;
    doc["appreciable_ratio"] = appreciable.to_string();
    doc["appreciable_adequal"] = appreciable_adequal;
    doc["all_adequal"] = report.all_adequal;
    doc["max_order1_abs"] = report.max_order1_abs;

    if (opts.format == "json") {
        write_output(opts.out, doc.dump(2) + "\n");
    } else if (opts.format == "text") {
        write_output(opts.out, text.str());
    } else {
        throw std::invalid_argument("unknown format: " + opts.format);
    }

    if (opts.strict &&
        (!report.all_adequal || report.max_order1_abs > 1e-10 || max_residual > 1e-12))
        throw InconclusiveVerdict("series checks did not certify adequality");
    return 0;
}

// ---------------------------------------------------------------------------
// gronwall
// ---------------------------------------------------------------------------

struct GronwallOpts {
    double eta = 0.0;
    double lipschitz = 1.0;
    double t_max = 10.0;
    int rows = 50;
    std::string out = "-";
};

int run_gronwall(const GronwallOpts& opts) {
    if (opts.rows < 1) throw std::invalid_argument("need at least one row");
    std::vector<std::pair<double, double>> table;
    for (int i = 0; i <= opts.rows; ++i) {
        const double t = opts.t_max * static_cast<double>(i) / opts.rows;
        table.emplace_back(t, flows::gronwall_envelope(opts.eta, opts.lipschitz, t));
    }
    std::ostringstream csv;
    io::write_gronwall_csv(csv, table);
    write_output(opts.out, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperreal Euler walks: prevector fields, adequality sweeps, and the\n"
                 "amplitude-independence of small pendulum oscillations."};
    app.require_subcommand(1);
    app.set_config("--config", "", "optional key=value config file; flags take precedence");

    WalkOpts walk_opts;
    auto* walk_cmd = app.add_subcommand("walk", "iterate one prevector field, emit CSV");
    add_pendulum_opts(walk_cmd, walk_opts.pend);
    walk_cmd->add_option("--field", walk_opts.field,
                         "nonlinear|linearized|rotation|zero")->capture_default_str();
    walk_cmd->add_option("--lambda", walk_opts.mesh, "mesh [time]")->capture_default_str();
    walk_cmd->add_option("--n-per-period", walk_opts.n_per_period,
                         "steps per linear period; overrides --lambda when set");
    walk_cmd->add_option("--t-final", walk_opts.t_final, "horizon [time]")
        ->capture_default_str();
    walk_cmd->add_option("--record-stride", walk_opts.record_stride,
                         "record every n-th step (0 = auto)");
    walk_cmd->add_option("--z0", walk_opts.z0, "initial state re im (default: amplitude, 0)")
        ->expected(2);
    walk_cmd->add_option("-o,--out", walk_opts.out, "output path ('-' for stdout)")
        ->capture_default_str();

    CompareOpts compare_opts;
    auto* compare_cmd =
        app.add_subcommand("compare", "lockstep deviation sweep for a field pair, emit JSON");
    add_pendulum_opts(compare_cmd, compare_opts.pend);
    compare_cmd->add_option("--pair", compare_opts.pair,
                            "nonlinear-linearized|linearized-rotation|nonlinear-rotation")
        ->capture_default_str();
    compare_cmd->add_option("--sweep", compare_opts.sweep, "lambda|amplitude")
        ->capture_default_str();
    compare_cmd->add_option("--lambdas", compare_opts.lambdas, "mesh sweep values [time]");
    compare_cmd->add_option("--amplitudes", compare_opts.amplitudes,
                            "amplitude sweep values [rad]");
    compare_cmd->add_option("--lambda", compare_opts.fixed_lambda,
                            "fixed mesh for amplitude sweeps [time]")
        ->capture_default_str();
    compare_cmd->add_option("--t-final", compare_opts.t_final, "horizon [time]")
        ->capture_default_str();
    compare_cmd->add_option("--lipschitz", compare_opts.lipschitz,
                            "Lipschitz constant for the envelope (0 = omega) [1/time]");
    compare_cmd->add_option("--eta-radius", compare_opts.eta_radius,
                            "disk radius for discrepancy sampling (0 = auto) [rad]");
    compare_cmd->add_option("-o,--out", compare_opts.out, "output path ('-' for stdout)")
        ->capture_default_str();
    compare_cmd->add_flag("--strict", compare_opts.strict,
                          "exit 4 when the verdict is inconclusive");

    PeriodOpts period_opts;
    auto* period_cmd = app.add_subcommand(
        "period", "amplitude sweep of measured periods; emits <out>_f.csv, <out>_h.csv, "
                  "<out>_summary.json");
    add_pendulum_opts(period_cmd, period_opts.pend);
    period_cmd->add_option("--amplitudes", period_opts.amplitudes, "sweep values [rad]");
    period_cmd->add_option("--n-per-period", period_opts.n_per_period,
                           "steps per linear period at the base mesh (>= 10^4)")
        ->capture_default_str();
    period_cmd->add_option("--richardson-levels", period_opts.richardson_levels,
                           "mesh refinement levels for the extrapolated period")
        ->capture_default_str();
    period_cmd->add_option("--periods", period_opts.periods, "linear periods to walk")
        ->capture_default_str();
    period_cmd->add_option("-o,--out", period_opts.out, "output file prefix")
        ->capture_default_str();
    period_cmd->add_flag("--strict", period_opts.strict,
                         "exit 4 when the verdict is inconclusive");

    SeriesOpts series_opts;
    auto* series_cmd =
        app.add_subcommand("series", "truncated-series demos: linearization ratio, identities");
    series_cmd->add_option("-k,--trunc-k", series_opts.truncation, "truncation order K")
        ->capture_default_str();
    series_cmd->add_option("--z-re", series_opts.z_re, "real parts of plane samples");
    series_cmd->add_option("--z-im", series_opts.z_im, "imaginary parts of plane samples");
    series_cmd->add_option("--samples", series_opts.samples, "random inputs for identity checks")
        ->capture_default_str();
    series_cmd->add_option("--seed", series_opts.seed, "RNG seed for identity checks")
        ->capture_default_str();
    series_cmd->add_option("--format", series_opts.format, "text|json")->capture_default_str();
    series_cmd->add_option("-o,--out", series_opts.out, "output path ('-' for stdout)")
        ->capture_default_str();
    series_cmd->add_flag("--strict", series_opts.strict,
                         "exit 4 when the checks do not certify adequality");

    GronwallOpts gronwall_opts;
    auto* gronwall_cmd = app.add_subcommand("gronwall", "envelope table, emit CSV");
    gronwall_cmd->add_option("--eta", gronwall_opts.eta, "per-step discrepancy rate [1/time]")
        ->required();
    gronwall_cmd->add_option("--lipschitz", gronwall_opts.lipschitz,
                             "Lipschitz constant [1/time]")
        ->required();
    gronwall_cmd->add_option("--t-max", gronwall_opts.t_max, "table horizon [time]")
        ->capture_default_str();
    gronwall_cmd->add_option("--rows", gronwall_opts.rows, "number of table rows")
        ->capture_default_str();
    gronwall_cmd->add_option("-o,--out", gronwall_opts.out, "output path ('-' for stdout)")
        ->capture_default_str();

    int rc = 0;
    walk_cmd->callback([&] { rc = run_walk(walk_opts); });
    compare_cmd->callback([&] { rc = run_compare(compare_opts); });
    period_cmd->callback([&] { rc = run_period(period_opts); });
    series_cmd->callback([&] { rc = run_series(series_opts); });
    gronwall_cmd->callback([&] { rc = run_gronwall(gronwall_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InconclusiveVerdict& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
