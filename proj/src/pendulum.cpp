#include "hyperwalk/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hyperwalk/errors.hpp"

namespace hyperwalk::pendulum {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t stride_for(std::int64_t steps) {
    return std::max<std::int64_t>(1, steps / 200000);
}

flows::Trajectory walk_or_throw(const flows::PrevectorField& field, Complex z0,
                                std::int64_t steps, std::int64_t stride,
                                const std::string& what) {
    flows::Trajectory traj = flows::walk(field, z0, steps, stride);
    if (traj.terminated_early)
        throw NumericalError(what + ": walk terminated early (" + traj.termination_reason + ")");
    return traj;
}

}  // namespace

double PendulumParams::omega() const { return std::sqrt(gravity / length); }

void PendulumParams::validate() const {
    if (!(gravity > 0.0) || !std::isfinite(gravity))
        throw std::invalid_argument("gravity must be positive");
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("length must be positive");
    if (!(amplitude > 0.0) || !(amplitude < kPi))
        throw std::invalid_argument("amplitude must lie in (0, pi), the oscillatory regime");
}

FieldTriple make_fields(const PendulumParams& params, double mesh) {
    params.validate();
    if (!(mesh > 0.0)) throw std::invalid_argument("mesh must be positive");

    const double w = params.omega();
    const double radius = 10.0 * params.amplitude + 1.0;

    flows::VectorField nonlinear{
        [w](const Complex& z) { return Complex(w * z.imag(), -w * std::sin(z.real())); }, w,
        radius};
    flows::VectorField linearized{
        [w](const Complex& z) { return Complex(w * z.imag(), -w * z.real()); }, w, radius};

    const double c = std::cos(mesh * w);
    const double s = std::sin(mesh * w);
    auto rotate = [c, s](const Complex& z) {
        return Complex(z.real() * c + z.imag() * s, -z.real() * s + z.imag() * c);
    };

    return FieldTriple{
        flows::PrevectorField::from_field(std::move(nonlinear), mesh),
        flows::PrevectorField::from_field(std::move(linearized), mesh),
        flows::PrevectorField::from_map(rotate, mesh, w, radius),
    };
}

double choose_lambda(double omega, std::int64_t n_per_period) {
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
    if (n_per_period < 8) throw std::invalid_argument("need at least 8 steps per period");
    return 2.0 * kPi / (omega * static_cast<double>(n_per_period));
}

Complex h_walk_closed_form(double amplitude, double t, double omega) {
    return Complex(amplitude * std::cos(omega * t), -amplitude * std::sin(omega * t));
}

PeriodEstimate measure_period(const flows::Trajectory& traj) {
    // Downward crossings of {Im z = 0, Re z > 0}, linearly interpolated.
    std::vector<double> crossings;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const auto& a = traj.samples[i];
        const auto& b = traj.samples[i + 1];
        const double ya = a.z.imag();
        const double yb = b.z.imag();
        if (!(ya > 0.0 && yb <= 0.0)) continue;
        const double s = ya / (ya - yb);
        const double x_cross = a.z.real() + s * (b.z.real() - a.z.real());
        if (x_cross > 0.0) crossings.push_back(a.t + s * (b.t - a.t));
    }
    if (crossings.size() < 2) throw NumericalError("no full oscillation observed");

    std::vector<double> spacings(crossings.size() - 1);
    for (std::size_t i = 0; i + 1 < crossings.size(); ++i)
        spacings[i] = crossings[i + 1] - crossings[i];

    double mean = 0.0;
    for (double s : spacings) mean += s;
    mean /= static_cast<double>(spacings.size());
    double var = 0.0;
    for (double s : spacings) var += (s - mean) * (s - mean);
    var /= static_cast<double>(spacings.size());

    PeriodEstimate est;
    est.period = mean;
    est.mesh = traj.mesh;
    est.residual = std::sqrt(var);
    est.oscillations = static_cast<int>(spacings.size());
    return est;
}

double complete_elliptic_k(double modulus) {
    const double k = std::abs(modulus);
    if (!(k < 1.0)) throw std::domain_error("elliptic modulus must satisfy |k| < 1");
    double a = 1.0;
    double g = std::sqrt(1.0 - k * k);
    for (int i = 0; i < 64 && std::abs(a - g) > 1e-12 * a; ++i) {
        const double a_next = 0.5 * (a + g);
        g = std::sqrt(a * g);
        a = a_next;
    }
    return kPi / (2.0 * a);
}

double exact_period_oracle(double amplitude, double gravity, double length) {
    if (!(gravity > 0.0) || !(length > 0.0))
        throw std::invalid_argument("gravity and length must be positive");
    if (!(amplitude > 0.0) || !(amplitude < kPi))
        throw std::domain_error("period oracle defined for amplitudes in (0, pi)");
    return 4.0 * std::sqrt(length / gravity) * complete_elliptic_k(std::sin(amplitude / 2.0));
}

asymptotic::AsymptoticNumber linearization_ratio(Complex z_sample,
                                                 const asymptotic::AsymptoticNumber& amplitude) {
    using asymptotic::AsymptoticNumber;
    if (z_sample == Complex{}) throw std::invalid_argument("plane sample must be nonzero");
    if (amplitude.is_zero()) throw std::invalid_argument("amplitude must be nonzero");

    const int K = amplitude.truncation_order();
    const auto i_unit = AsymptoticNumber::constant(Complex(0.0, 1.0), K);
    const auto ax = amplitude * AsymptoticNumber::constant(z_sample.real(), K);
    const auto ay = amplitude * AsymptoticNumber::constant(z_sample.imag(), K);

    // delta_F(aZ)/(mesh*w) = a*Y - i sin(a*X);  delta_E(aZ)/(mesh*w) = -i a Z.
    const auto numerator = ay - i_unit * asymptotic::sin(ax);
    const auto denominator = -(i_unit * amplitude * AsymptoticNumber::constant(z_sample, K));
    return numerator / denominator;
}

RescaledAdequalityReport rescaled_adequality_check(std::span<const Complex> z_samples,
                                                   int truncation_order) {
    using asymptotic::AsymptoticNumber;
    RescaledAdequalityReport report;
    const auto eps = AsymptoticNumber::epsilon(truncation_order);
    const auto one = AsymptoticNumber::constant(1.0, truncation_order);
    for (const Complex& z : z_samples) {
        if (std::abs(z) > 1.0 + 1e-12)
            throw std::invalid_argument("plane samples must satisfy |Z| <= 1");
        RescaledRatioRow row;
        row.z_sample = z;
        row.ratio = linearization_ratio(z, eps);
        row.order1_coefficient = row.ratio.coefficient(1);
        row.order2_coefficient = row.ratio.coefficient(2);
        row.adequal_to_one = asymptotic::adequal_checked(row.ratio, one).holds;
        report.all_adequal = report.all_adequal && row.adequal_to_one;
        report.max_order1_abs =
            std::max(report.max_order1_abs, std::abs(row.order1_coefficient));
        report.rows.push_back(std::move(row));
    }
    return report;
}

void LambdaPolicy::validate() const {
    if (n_per_period < 8) throw std::invalid_argument("n_per_period must be at least 8");
    if (richardson_levels < 1) throw std::invalid_argument("need at least one mesh level");
    if (!(periods_to_walk >= 3.0))
        throw std::invalid_argument("need at least 3 periods to measure a period");
}

double measure_nonlinear_period(const PendulumParams& params, const LambdaPolicy& policy,
                                std::vector<std::pair<double, double>>* per_mesh) {
    params.validate();
    policy.validate();
    const double w = params.omega();
    const Complex z0(params.amplitude, 0.0);

    std::vector<std::pair<double, double>> measured;
    for (int j = 0; j < policy.richardson_levels; ++j) {
        const std::int64_t n = policy.n_per_period << j;
        const double mesh = choose_lambda(w, n);
        const auto steps =
            static_cast<std::int64_t>(std::ceil(policy.periods_to_walk * static_cast<double>(n)));
        const FieldTriple fields = make_fields(params, mesh);
        const flows::Trajectory traj =
            walk_or_throw(fields.nonlinear, z0, steps, stride_for(steps),
                          "amplitude " + std::to_string(params.amplitude));
        measured.emplace_back(mesh, measure_period(traj).period);
    }
    if (per_mesh) *per_mesh = measured;

    const std::size_t m = measured.size();
    if (m == 1) return measured[0].second;
    // First-order Richardson from the two finest meshes.
    const auto [lb, tb] = measured[m - 2];
    const auto [lc, tc] = measured[m - 1];
    return tc + (tc - tb) * (lc / (lb - lc));
}

SmallOscillationReport small_oscillation_report(std::span<const double> amplitudes,
                                                const PendulumParams& base,
                                                const LambdaPolicy& policy) {
    if (amplitudes.size() < 3)
        throw std::invalid_argument("amplitude sweep needs at least 3 values");
    for (std::size_t i = 0; i + 1 < amplitudes.size(); ++i) {
        if (!(amplitudes[i] > amplitudes[i + 1]))
            throw std::invalid_argument("amplitudes must be strictly decreasing");
    }
    if (policy.n_per_period < 10000)
        throw std::invalid_argument("the sweep requires n_per_period >= 10^4");
    policy.validate();

    PendulumParams params = base;
    params.amplitude = amplitudes.front();
    params.validate();

    const double w = params.omega();
    const double t_linear = 2.0 * kPi / w;
    const double base_mesh = choose_lambda(w, policy.n_per_period);
    const double finest_mesh =
        choose_lambda(w, policy.n_per_period << (policy.richardson_levels - 1));

    SmallOscillationReport report;
    for (double a : amplitudes) {
        params.amplitude = a;
        params.validate();

        OscillationRow f_row;
        f_row.amplitude = a;
        f_row.mesh = finest_mesh;
        f_row.period_linear = t_linear;
        f_row.period_oracle = exact_period_oracle(a, params.gravity, params.length);
        f_row.period_measured = measure_nonlinear_period(params, policy);
        f_row.abs_dev = std::abs(f_row.period_measured - t_linear);
        f_row.rel_dev = f_row.abs_dev / t_linear;
        report.nonlinear_rows.push_back(f_row);

        const auto steps = static_cast<std::int64_t>(
            std::ceil(policy.periods_to_walk * static_cast<double>(policy.n_per_period)));
        const FieldTriple fields = make_fields(params, base_mesh);
        const flows::Trajectory traj =
            walk_or_throw(fields.rotation, Complex(a, 0.0), steps, stride_for(steps),
                          "amplitude " + std::to_string(a));

        OscillationRow h_row;
        h_row.amplitude = a;
        h_row.mesh = base_mesh;
        h_row.period_linear = t_linear;
        h_row.period_oracle = f_row.period_oracle;
        h_row.period_measured = measure_period(traj).period;
        h_row.abs_dev = std::abs(h_row.period_measured - t_linear);
        h_row.rel_dev = h_row.abs_dev / t_linear;
        report.rotation_rows.push_back(h_row);
    }

    {
        std::vector<double> scales(amplitudes.begin(), amplitudes.end());
        std::vector<double> devs;
        for (const auto& row : report.nonlinear_rows) devs.push_back(row.rel_dev);
        report.deviation_fit = flows::fit_power_law(scales, devs);
    }

    // F vs E across the amplitude sweep at one fixed fine mesh.
    {
        const double mesh = choose_lambda(w, 10 * policy.n_per_period);
        const double horizon = 3.0 * t_linear;
        std::vector<double> scales, abs_col, rel_col;
        for (double a : amplitudes) {
            params.amplitude = a;
            const FieldTriple fields = make_fields(params, mesh);
            const auto dev = flows::walk_deviation(fields.nonlinear, fields.linearized,
                                                   Complex(a, 0.0), horizon);
            if (dev.truncated)
                throw NumericalError("amplitude " + std::to_string(a) +
                                     ": deviation sweep truncated (" + dev.reason + ")");
            scales.push_back(a);
            abs_col.push_back(dev.sup_abs);
            rel_col.push_back(dev.sup_rel);
        }
        report.nonlinear_vs_linearized =
            flows::make_adequality_report("amplitude", scales, abs_col, rel_col);
    }

    // E vs H across a mesh sweep at the middle amplitude.
    {
        const double a_ref = amplitudes[amplitudes.size() / 2];
        params.amplitude = a_ref;
        const double horizon = 3.0 * t_linear;
        std::vector<double> scales, abs_col, rel_col;
        for (int k = 0; k < 4; ++k) {
            const std::int64_t n = std::max<std::int64_t>(64, policy.n_per_period / 100)
                                   * (std::int64_t{1} << (2 * k));
            const double mesh = choose_lambda(w, n);
            const FieldTriple fields = make_fields(params, mesh);
            const auto dev = flows::walk_deviation(fields.linearized, fields.rotation,
                                                   Complex(a_ref, 0.0), horizon);
            if (dev.truncated)
                throw NumericalError("mesh " + std::to_string(mesh) +
                                     ": deviation sweep truncated (" + dev.reason + ")");
            scales.push_back(mesh);  // n grows, so the mesh sweep is decreasing
            abs_col.push_back(dev.sup_abs);
            rel_col.push_back(dev.sup_rel);
        }
        report.linearized_vs_rotation =
            flows::make_adequality_report("lambda", scales, abs_col, rel_col);
    }

    const auto& fit = report.deviation_fit;
    if (fit.usable && fit.residual <= flows::kFitResidualThreshold) {
        report.verdict = std::abs(fit.exponent - 2.0) <= 0.3 ? "quadratic" : "non_quadratic";
    } else {
        report.verdict = "inconclusive";
    }
    return report;
}

}  // namespace hyperwalk::pendulum
