#pragma once

// Prevector fields and their walks: fixed-mesh Euler iteration of
// F(z) = z + delta(z), deviation measurement between walks sharing a mesh,
// shadow extraction by mesh refinement, the discrete Gronwall envelope, and
// power-law fits over sweeps.
//
// Everything here is pure given its inputs and trajectories are immutable
// once returned, so sweeps may run concurrently; results do not depend on
// evaluation order.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hyperwalk::flows {

using Complex = std::complex<double>;

/// A classical vector field on the plane with a declared Lipschitz bound.
/// domain_radius == 0 means "choose at walk time" (10*|z0| + 1).
struct VectorField {
    std::function<Complex(const Complex&)> eval;
    double lipschitz_bound = 0.0;
    double domain_radius = 0.0;
};

/// F(z) = z + delta(z), where delta is either mesh * V(z) for a classical
/// field V, or comes from an exact self-map of the plane. One application
/// advances time by one mesh unit in both cases.
class PrevectorField {
public:
    enum class Kind { displacement, exact_map };

    [[nodiscard]] static PrevectorField from_field(VectorField field, double mesh);
    [[nodiscard]] static PrevectorField from_map(std::function<Complex(const Complex&)> map,
                                                 double mesh, double lipschitz_bound = 0.0,
                                                 double domain_radius = 0.0);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double mesh() const noexcept { return mesh_; }
    [[nodiscard]] double lipschitz_bound() const noexcept { return lipschitz_; }
    [[nodiscard]] double domain_radius() const noexcept { return radius_; }

    /// One step of the walk: F(z).
    [[nodiscard]] Complex step(const Complex& z) const {
        return kind_ == Kind::displacement ? z + mesh_ * field_(z) : map_(z);
    }

    /// The infinitesimal displacement delta(z) = F(z) - z.
    [[nodiscard]] Complex displacement(const Complex& z) const {
        return kind_ == Kind::displacement ? mesh_ * field_(z) : map_(z) - z;
    }

private:
    PrevectorField() = default;

    Kind kind_ = Kind::displacement;
    double mesh_ = 0.0;
    double lipschitz_ = 0.0;
    double radius_ = 0.0;
    std::function<Complex(const Complex&)> field_;  // displacement kind
    std::function<Complex(const Complex&)> map_;    // exact_map kind
};

struct TrajectorySample {
    std::int64_t n = 0;
    double t = 0.0;  // always n * mesh, never accumulated
    Complex z;
};

struct Trajectory {
    double mesh = 0.0;
    Complex initial;
    std::int64_t steps_requested = 0;
    std::int64_t record_stride = 1;
    std::vector<TrajectorySample> samples;
    bool terminated_early = false;
    std::string termination_reason;
};

/// Default recording stride: caps a trajectory at ~10^4 samples.
[[nodiscard]] std::int64_t default_record_stride(std::int64_t steps);

/// floor(t_final / mesh), with quotients within 1e-9 relative of an integer
/// snapped to it, so meshes chosen to divide the horizon land exactly.
[[nodiscard]] std::int64_t steps_for_horizon(double t_final, double mesh);

/// Iterate z_{n+1} = F(z_n) for `steps` steps, recording every
/// `record_stride` steps plus the final state. record_stride <= 0 chooses the
/// default. Walks that leave the domain radius or hit non-finite values stop
/// early with a reason instead of throwing.
[[nodiscard]] Trajectory walk(const PrevectorField& field, Complex z0, std::int64_t steps,
                              std::int64_t record_stride = 0);

struct DeviationSample {
    std::int64_t n = 0;
    double t = 0.0;
    double deviation = 0.0;  // |F-walk state - G-walk state|
};

struct DeviationResult {
    double sup_abs = 0.0;
    double sup_rel = 0.0;  // sup_abs / |z0|
    std::int64_t steps_compared = 0;
    bool truncated = false;  // a walk ended early; deviation covers the common prefix
    std::string reason;
    double max_norm = 0.0;  // max |z| seen along either walk (every step)
    std::vector<DeviationSample> samples;
};

/// Lockstep comparison of two walks sharing the same mesh, from the same z0,
/// over floor(t_final / mesh) steps. Sup is taken over recorded samples.
[[nodiscard]] DeviationResult walk_deviation(const PrevectorField& f, const PrevectorField& g,
                                             Complex z0, double t_final,
                                             std::int64_t record_stride = 0);

/// Discrete Gronwall bound (eta/K)(e^{Kt} - 1) on the deviation of two walks
/// whose per-step displacement discrepancy is at most eta * mesh and whose
/// displacement is Kλ-Lipschitz. K == 0 gives the limit eta * t.
[[nodiscard]] double gronwall_envelope(double eta, double lipschitz, double t);

/// Measured per-step discrepancy rate: sup over a polar grid of |z| <= radius
/// of |delta_F(z) - delta_G(z)| / mesh.
[[nodiscard]] double measure_discrepancy_rate(const PrevectorField& f, const PrevectorField& g,
                                              double radius, int n_radii = 24, int n_angles = 64);

struct ShadowResult {
    enum class Verdict { resolved, degenerate_exact, not_resolved };
    Verdict verdict = Verdict::not_resolved;
    Complex value;  // meaningful unless not_resolved
    std::optional<double> observed_order;
    std::vector<std::pair<double, Complex>> per_mesh;
    std::string note;
};

/// Standard part of the walk at time t, via Richardson extrapolation of the
/// final states across a strictly decreasing mesh sequence (first-order error
/// assumed; the last three meshes drive the extrapolation and the observed
/// order). Non-shrinking differences yield verdict not_resolved; differences
/// at rounding level yield degenerate_exact.
[[nodiscard]] ShadowResult flow_shadow(const std::function<PrevectorField(double)>& field_at_mesh,
                                       Complex z0, double t, std::span<const double> meshes);

struct PowerLawFit {
    bool usable = false;
    double exponent = 0.0;
    double prefactor = 0.0;
    double residual = 0.0;  // RMS in log space
    std::size_t points_used = 0;
    std::string note;
};

/// Least-squares fit of log(dev) = log C + p log(scale). Requires >= 3
/// strictly decreasing scales; zero deviations are excluded with a note.
[[nodiscard]] PowerLawFit fit_power_law(std::span<const double> scales,
                                        std::span<const double> deviations);

/// Verdict thresholds for adequality trend certification.
inline constexpr double kFitResidualThreshold = 0.25;
inline constexpr double kAdequalTrendMinExponent = 0.5;
inline constexpr double kNotAdequalMaxExponent = 0.1;

struct AdequalityReport {
    enum class Verdict { adequal_trend, not_adequal, inconclusive };
    std::string scale_name;
    std::vector<double> scales;
    std::vector<double> sup_abs;
    std::vector<double> sup_rel;
    std::optional<PowerLawFit> fit;  // present only when usable and residual passes
    Verdict verdict = Verdict::inconclusive;
};

[[nodiscard]] const char* to_string(AdequalityReport::Verdict v);

/// Assemble a report from a deviation sweep; the fit runs on sup_rel.
[[nodiscard]] AdequalityReport make_adequality_report(std::string scale_name,
                                                      std::vector<double> scales,
                                                      std::vector<double> sup_abs,
                                                      std::vector<double> sup_rel);

}  // namespace hyperwalk::flows
