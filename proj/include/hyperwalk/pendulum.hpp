#pragma once

// The pendulum case study on the plane z = x + iy, where x is the angle from
// the downward vertical and y the angular velocity scaled so that x' = w*y:
//
//   nonlinear field   F : delta(z) = mesh*w*y - i*mesh*w*sin(x)
//   linearized field  E : delta(z) = -i*mesh*w*z
//   rotation map      H : z -> e^{-i*mesh*w} z   (applied exactly)
//
// plus the mesh-divisibility convention, Poincare-section period
// measurement, the AGM elliptic-integral period oracle, and the
// amplitude-sweep report behind the small-oscillation result.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperwalk/asymptotic.hpp"
#include "hyperwalk/flows.hpp"

namespace hyperwalk::pendulum {

using flows::Complex;

struct PendulumParams {
    double gravity = 1.0;   // length/time^2
    double length = 1.0;    // rod length
    double amplitude = 0.1; // release angle, radians, in (0, pi)

    [[nodiscard]] double omega() const;  // sqrt(gravity/length)
    void validate() const;               // throws std::invalid_argument
};

struct FieldTriple {
    flows::PrevectorField nonlinear;   // F
    flows::PrevectorField linearized;  // E
    flows::PrevectorField rotation;    // H
};

/// The three prevector fields at a common mesh. All have Lipschitz bound
/// omega and domain radius 10*amplitude + 1.
[[nodiscard]] FieldTriple make_fields(const PendulumParams& params, double mesh);

/// Mesh tied to the linear period: mesh = 2*pi / (omega * n_per_period), so
/// one period is exactly n_per_period steps. Requires n_per_period >= 8.
[[nodiscard]] double choose_lambda(double omega, std::int64_t n_per_period);

/// Closed form of the rotation walk from (amplitude, 0):
/// a*cos(w t) - i*a*sin(w t).
[[nodiscard]] Complex h_walk_closed_form(double amplitude, double t, double omega);

struct PeriodEstimate {
    double period = 0.0;
    double mesh = 0.0;
    double residual = 0.0;  // standard deviation of crossing spacings
    int oscillations = 0;   // spacings averaged over
};

/// Period from successive downward crossings of the section
/// {Im z = 0, Re z > 0}, linearly interpolated between bracketing samples.
/// Throws NumericalError("no full oscillation observed") below 2 crossings.
[[nodiscard]] PeriodEstimate measure_period(const flows::Trajectory& traj);

/// Complete elliptic integral of the first kind via the arithmetic-geometric
/// mean, K(k) = pi / (2 agm(1, sqrt(1-k^2))), to 1e-12 relative.
[[nodiscard]] double complete_elliptic_k(double modulus);

/// Exact finite-amplitude period T(a) = 4 sqrt(length/gravity) K(sin(a/2)).
/// Independent of the walk machinery; used as the acceptance oracle.
[[nodiscard]] double exact_period_oracle(double amplitude, double gravity, double length);

/// Series ratio delta_F(aZ) / delta_E(aZ) for a point Z of the plane and an
/// amplitude given as an asymptotic number (omega cancels).
[[nodiscard]] asymptotic::AsymptoticNumber linearization_ratio(
    Complex z_sample, const asymptotic::AsymptoticNumber& amplitude);

struct RescaledRatioRow {
    Complex z_sample;
    asymptotic::AsymptoticNumber ratio;
    Complex order1_coefficient;  // must vanish for adequality to 1
    Complex order2_coefficient;  // leading defect, -X^3/(6Z)
    bool adequal_to_one = false;
};

struct RescaledAdequalityReport {
    std::vector<RescaledRatioRow> rows;
    bool all_adequal = true;
    double max_order1_abs = 0.0;
};

/// Evaluates the ratio at amplitude eps for each sample (|Z| <= 1, Z != 0)
/// and checks it is adequal to 1, i.e. 1 + O(eps^2) with no order-1 term.
[[nodiscard]] RescaledAdequalityReport rescaled_adequality_check(
    std::span<const Complex> z_samples, int truncation_order);

struct OscillationRow {
    double amplitude = 0.0;
    double mesh = 0.0;  // finest mesh entering the measurement
    double period_measured = 0.0;
    double period_oracle = 0.0;
    double period_linear = 0.0;
    double abs_dev = 0.0;  // |period_measured - period_linear|
    double rel_dev = 0.0;  // abs_dev / period_linear
};

struct LambdaPolicy {
    std::int64_t n_per_period = 10000;  // >= 10^4 per the divisibility convention
    int richardson_levels = 3;          // meshes lambda0 / 2^j, j = 0..levels-1
    double periods_to_walk = 8.0;       // horizon per period measurement

    void validate() const;
};

/// Nonlinear period at amplitude a, Richardson-extrapolated in the mesh
/// across the policy's refinement levels. Returns the extrapolated estimate;
/// per-mesh raw values go to *per_mesh when non-null.
[[nodiscard]] double measure_nonlinear_period(
    const PendulumParams& params, const LambdaPolicy& policy,
    std::vector<std::pair<double, double>>* per_mesh = nullptr);

struct SmallOscillationReport {
    std::vector<OscillationRow> nonlinear_rows;  // F, extrapolated in mesh
    std::vector<OscillationRow> rotation_rows;   // H, at the base mesh
    flows::PowerLawFit deviation_fit;            // rel_dev vs amplitude
    flows::AdequalityReport nonlinear_vs_linearized;  // amplitude sweep, fixed mesh
    flows::AdequalityReport linearized_vs_rotation;   // mesh sweep, fixed amplitude
    std::string verdict;  // "quadratic" | "non_quadratic" | "inconclusive"
};

/// The full amplitude sweep: per-amplitude measured periods against oracle
/// and linear values, the fitted deviation exponent, and the lockstep
/// deviation sweeps for F-vs-E (in amplitude) and E-vs-H (in mesh).
[[nodiscard]] SmallOscillationReport small_oscillation_report(
    std::span<const double> amplitudes, const PendulumParams& base,
    const LambdaPolicy& policy = {});

}  // namespace hyperwalk::pendulum
