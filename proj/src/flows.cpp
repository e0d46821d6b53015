#include "hyperwalk/flows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hyperwalk/errors.hpp"

namespace hyperwalk::flows {

namespace {

bool finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

double effective_radius(const PrevectorField& field, const Complex& z0) {
    const double r = field.domain_radius();
    return r > 0.0 ? r : 10.0 * std::abs(z0) + 1.0;
}

}  // namespace

std::int64_t steps_for_horizon(double t_final, double mesh) {
    if (mesh <= 0.0) throw std::invalid_argument("mesh must be positive");
    if (t_final < 0.0) throw std::invalid_argument("time horizon must be non-negative");
    const double q = t_final / mesh;
    const double nearest = std::nearbyint(q);
    if (nearest > 0.0 && std::abs(q - nearest) <= 1e-9 * nearest)
        return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::floor(q));
}

PrevectorField PrevectorField::from_field(VectorField field, double mesh) {
    if (mesh <= 0.0) throw std::invalid_argument("mesh must be positive");
    if (!field.eval) throw std::invalid_argument("vector field has no evaluator");
    PrevectorField f;
    f.kind_ = Kind::displacement;
    f.mesh_ = mesh;
    f.lipschitz_ = field.lipschitz_bound;
    f.radius_ = field.domain_radius;
    f.field_ = std::move(field.eval);
    return f;
}

PrevectorField PrevectorField::from_map(std::function<Complex(const Complex&)> map, double mesh,
                                        double lipschitz_bound, double domain_radius) {
    if (mesh <= 0.0) throw std::invalid_argument("mesh must be positive");
    if (!map) throw std::invalid_argument("exact map is empty");
    PrevectorField f;
    f.kind_ = Kind::exact_map;
    f.mesh_ = mesh;
    f.lipschitz_ = lipschitz_bound;
    f.radius_ = domain_radius;
    f.map_ = std::move(map);
    return f;
}

std::int64_t default_record_stride(std::int64_t steps) {
    return std::max<std::int64_t>(1, steps / 10000);
}

Trajectory walk(const PrevectorField& field, Complex z0, std::int64_t steps,
                std::int64_t record_stride) {
    if (steps < 0) throw std::invalid_argument("step count must be non-negative");
    if (record_stride <= 0) record_stride = default_record_stride(steps);

    Trajectory traj;
    traj.mesh = field.mesh();
    traj.initial = z0;
    traj.steps_requested = steps;
    traj.record_stride = record_stride;
    traj.samples.reserve(static_cast<std::size_t>(steps / record_stride) + 2);

    const double radius2 = [&] {
        const double r = effective_radius(field, z0);
        return r * r;
    }();

    Complex z = z0;
    traj.samples.push_back({0, 0.0, z});
    for (std::int64_t n = 1; n <= steps; ++n) {
        const Complex next = field.step(z);
        if (!finite(next)) {
            traj.terminated_early = true;
            traj.termination_reason = "numerical blowup";
            if (traj.samples.back().n != n - 1) {  // keep the last finite state
                traj.samples.push_back({n - 1, static_cast<double>(n - 1) * traj.mesh, z});
            }
            break;
        }
        z = next;
        if (std::norm(z) > radius2) {
            traj.terminated_early = true;
            traj.termination_reason = "left domain";
            traj.samples.push_back({n, static_cast<double>(n) * traj.mesh, z});
            break;
        }
        if (n % record_stride == 0 || n == steps) {
            traj.samples.push_back({n, static_cast<double>(n) * traj.mesh, z});
        }
    }
    return traj;
}

DeviationResult walk_deviation(const PrevectorField& f, const PrevectorField& g, Complex z0,
                               double t_final, std::int64_t record_stride) {
    if (f.mesh() != g.mesh())
        throw std::invalid_argument("lockstep comparison requires a shared mesh");
    const double mesh = f.mesh();
    const std::int64_t steps = steps_for_horizon(t_final, mesh);
    if (record_stride <= 0) record_stride = default_record_stride(steps);

    DeviationResult result;
    const double rf2 = [&] { const double r = effective_radius(f, z0); return r * r; }();
    const double rg2 = [&] { const double r = effective_radius(g, z0); return r * r; }();

    Complex zf = z0;
    Complex zg = z0;
    result.max_norm = std::abs(z0);
    result.samples.push_back({0, 0.0, 0.0});
    for (std::int64_t n = 1; n <= steps; ++n) {
        zf = f.step(zf);
        zg = g.step(zg);
        if (!finite(zf) || !finite(zg)) {
            result.truncated = true;
            result.reason = "numerical blowup";
            break;
        }
        const double nf2 = std::norm(zf);
        const double ng2 = std::norm(zg);
        if (nf2 > rf2 || ng2 > rg2) {
            result.truncated = true;
            result.reason = "left domain";
            break;
        }
        result.max_norm = std::max({result.max_norm, std::sqrt(nf2), std::sqrt(ng2)});
        result.steps_compared = n;
        if (n % record_stride == 0 || n == steps) {
            const double dev = std::abs(zf - zg);
            result.samples.push_back({n, static_cast<double>(n) * mesh, dev});
            result.sup_abs = std::max(result.sup_abs, dev);
        }
    }
    const double scale = std::abs(z0);
    result.sup_rel = scale > 0.0 ? result.sup_abs / scale : result.sup_abs;
    return result;
}

double gronwall_envelope(double eta, double lipschitz, double t) {
    if (eta < 0.0) throw std::invalid_argument("discrepancy rate must be non-negative");
    if (lipschitz < 0.0) throw std::invalid_argument("Lipschitz constant must be non-negative");
    if (t < 0.0) throw std::invalid_argument("time must be non-negative");
    if (lipschitz == 0.0) return eta * t;
    return (eta / lipschitz) * std::expm1(lipschitz * t);
}

double measure_discrepancy_rate(const PrevectorField& f, const PrevectorField& g, double radius,
                                int n_radii, int n_angles) {
    if (f.mesh() != g.mesh())
        throw std::invalid_argument("discrepancy rate requires a shared mesh");
    if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
    if (n_radii < 1 || n_angles < 1) throw std::invalid_argument("grid must be non-empty");

    double sup = 0.0;
    for (int i = 1; i <= n_radii; ++i) {
        const double r = radius * static_cast<double>(i) / n_radii;
        for (int k = 0; k < n_angles; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / n_angles;
            const Complex z = std::polar(r, theta);
            sup = std::max(sup, std::abs(f.displacement(z) - g.displacement(z)));
        }
    }
    return sup / f.mesh();
}

ShadowResult flow_shadow(const std::function<PrevectorField(double)>& field_at_mesh, Complex z0,
                         double t, std::span<const double> meshes) {
    if (meshes.size() < 3)
        throw std::invalid_argument("shadow extraction needs at least 3 mesh values");
    for (std::size_t i = 0; i + 1 < meshes.size(); ++i) {
        if (!(meshes[i] > meshes[i + 1]))
            throw std::invalid_argument("mesh sequence must be strictly decreasing");
    }
    if (t < 0.0) throw std::invalid_argument("time must be non-negative");

    ShadowResult result;
    if (t == 0.0) {
        result.verdict = ShadowResult::Verdict::degenerate_exact;
        result.value = z0;
        result.note = "zero horizon";
        for (double mesh : meshes) result.per_mesh.emplace_back(mesh, z0);
        return result;
    }

    for (double mesh : meshes) {
        if (mesh >= t) throw std::invalid_argument("mesh not smaller than horizon");
        const PrevectorField field = field_at_mesh(mesh);
        const std::int64_t steps = steps_for_horizon(t, mesh);
        Trajectory traj = walk(field, z0, steps, steps > 0 ? steps : 1);
        if (traj.terminated_early)
            throw NumericalError("walk failed during shadow extraction: " +
                                 traj.termination_reason);
        result.per_mesh.emplace_back(mesh, traj.samples.back().z);
    }

    const std::size_t m = result.per_mesh.size();
    const Complex fa = result.per_mesh[m - 3].second;
    const double lb = result.per_mesh[m - 2].first;
    const Complex fb = result.per_mesh[m - 2].second;
    const double lc = result.per_mesh[m - 1].first;
    const Complex fc = result.per_mesh[m - 1].second;

    const double d1 = std::abs(fa - fb);
    const double d2 = std::abs(fb - fc);
    const double scale = std::max(1.0, std::abs(fc));

    // Exact maps land on the same point at every mesh; only floating-point
    // accumulation (about eps per step) separates the values.
    if (d1 <= 1e-9 * scale && d2 <= 1e-9 * scale) {
        result.verdict = ShadowResult::Verdict::degenerate_exact;
        result.value = fc;
        result.note = "per-mesh values identical to rounding; extrapolation degenerate";
        return result;
    }
    if (d2 >= d1) {
        result.verdict = ShadowResult::Verdict::not_resolved;
        result.note = "non-monotone convergence; shadow not resolved";
        return result;
    }

    // First-order Richardson from the two finest meshes; the third value
    // estimates the observed order (assumes near-geometric spacing).
    result.verdict = ShadowResult::Verdict::resolved;
    result.value = fc + (fc - fb) * (lc / (lb - lc));
    result.observed_order = std::log(d1 / d2) / std::log(lb / lc);
    return result;
}

PowerLawFit fit_power_law(std::span<const double> scales, std::span<const double> deviations) {
    if (scales.size() != deviations.size())
        throw std::invalid_argument("scales and deviations must have equal length");
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        if (!(scales[i] > scales[i + 1]))
            throw std::invalid_argument("scales must be strictly decreasing");
    }

    PowerLawFit fit;
    std::vector<double> lx, ly;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] <= 0.0) throw std::invalid_argument("scales must be positive");
        if (deviations[i] < 0.0) throw std::invalid_argument("deviations must be non-negative");
        if (deviations[i] == 0.0) {
            ++skipped;
            continue;
        }
        lx.push_back(std::log(scales[i]));
        ly.push_back(std::log(deviations[i]));
    }
    if (skipped > 0) fit.note = std::to_string(skipped) + " zero deviation(s) excluded";
    fit.points_used = lx.size();
    if (lx.size() < 3) {
        fit.usable = false;
        if (!fit.note.empty()) fit.note += "; ";
        fit.note += "fewer than 3 usable points";
        return fit;
    }

    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    fit.exponent = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / n;
    fit.prefactor = std::exp(intercept);

    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + fit.exponent * lx[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.usable = true;
    return fit;
}

const char* to_string(AdequalityReport::Verdict v) {
    switch (v) {
        case AdequalityReport::Verdict::adequal_trend: return "adequal_trend";
        case AdequalityReport::Verdict::not_adequal: return "not_adequal";
        case AdequalityReport::Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

AdequalityReport make_adequality_report(std::string scale_name, std::vector<double> scales,
                                        std::vector<double> sup_abs,
                                        std::vector<double> sup_rel) {
    if (scales.size() != sup_abs.size() || scales.size() != sup_rel.size())
        throw std::invalid_argument("sweep columns must have equal length");

    AdequalityReport report;
    report.scale_name = std::move(scale_name);
    report.scales = std::move(scales);
    report.sup_abs = std::move(sup_abs);
    report.sup_rel = std::move(sup_rel);

    if (report.scales.size() >= 3) {
        PowerLawFit fit = fit_power_law(report.scales, report.sup_rel);
        if (fit.usable && fit.residual <= kFitResidualThreshold) {
            report.fit = fit;
            if (fit.exponent >= kAdequalTrendMinExponent)
                report.verdict = AdequalityReport::Verdict::adequal_trend;
            else if (fit.exponent <= kNotAdequalMaxExponent)
                report.verdict = AdequalityReport::Verdict::not_adequal;
            else
                report.verdict = AdequalityReport::Verdict::inconclusive;
        }
    }
    return report;
}

}  // namespace hyperwalk::flows
