#include "hyperwalk/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace hyperwalk::asymptotic {

namespace {

void require_valid_truncation(int trunc) {
    if (trunc < 0) throw std::invalid_argument("truncation order must be non-negative");
}

}  // namespace

AsymptoticNumber AsymptoticNumber::zero(int truncation_order) {
    require_valid_truncation(truncation_order);
    return AsymptoticNumber(0, {}, truncation_order);
}

AsymptoticNumber AsymptoticNumber::constant(Complex value, int truncation_order) {
    return monomial(value, 0, truncation_order);
}

AsymptoticNumber AsymptoticNumber::epsilon(int truncation_order) {
    return monomial(1.0, 1, truncation_order);
}

AsymptoticNumber AsymptoticNumber::monomial(Complex scale, int order, int truncation_order) {
    require_valid_truncation(truncation_order);
    if (scale == Complex{}) return zero(truncation_order);
    std::vector<Complex> c(static_cast<std::size_t>(truncation_order) + 1, Complex{});
    c[0] = scale;
    return AsymptoticNumber(order, std::move(c), truncation_order);
}

AsymptoticNumber AsymptoticNumber::from_coefficients(int leading_order,
                                                     std::vector<Complex> coeffs,
                                                     int truncation_order) {
    require_valid_truncation(truncation_order);
    return normalized(leading_order, std::move(coeffs), truncation_order);
}

AsymptoticNumber AsymptoticNumber::normalized(int lead, std::vector<Complex> raw, int trunc) {
    double max_abs = 0.0;
    for (const Complex& c : raw) max_abs = std::max(max_abs, std::abs(c));
    if (max_abs == 0.0) return zero(trunc);

    const double flush = kCoefficientFlushRelative * max_abs;
    for (Complex& c : raw) {
        if (std::abs(c) < flush) c = Complex{};
    }

    std::size_t first = 0;
    while (first < raw.size() && raw[first] == Complex{}) ++first;
    if (first == raw.size()) return zero(trunc);

    // Re-anchor at the first surviving coefficient. Entries beyond the
    // original window are unknown and enter as zeros; the window width
    // stays K+1 regardless.
    std::vector<Complex> c(static_cast<std::size_t>(trunc) + 1, Complex{});
    const std::size_t avail = raw.size() - first;
    std::copy_n(raw.begin() + static_cast<std::ptrdiff_t>(first), std::min(avail, c.size()),
                c.begin());
    return AsymptoticNumber(lead + static_cast<int>(first), std::move(c), trunc);
}

void AsymptoticNumber::require_same_truncation(const AsymptoticNumber& a,
                                               const AsymptoticNumber& b) {
    if (a.trunc_ != b.trunc_)
        throw std::invalid_argument("mismatched truncation orders in series arithmetic");
}

int AsymptoticNumber::leading_order() const {
    if (is_zero()) throw std::logic_error("canonical zero has no leading order");
    return lead_;
}

Complex AsymptoticNumber::leading_coefficient() const {
    if (is_zero()) throw std::logic_error("canonical zero has no leading coefficient");
    return coeffs_.front();
}

Complex AsymptoticNumber::coefficient(int order) const noexcept {
    if (is_zero()) return {};
    const int idx = order - lead_;
    if (idx < 0 || idx > trunc_) return {};
    return coeffs_[static_cast<std::size_t>(idx)];
}

AsymptoticNumber AsymptoticNumber::operator-() const {
    AsymptoticNumber r = *this;
    for (Complex& c : r.coeffs_) c = -c;
    return r;
}

AsymptoticNumber operator+(const AsymptoticNumber& a, const AsymptoticNumber& b) {
    AsymptoticNumber::require_same_truncation(a, b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const int lead = std::min(a.lead_, b.lead_);
    std::vector<Complex> sum(static_cast<std::size_t>(a.trunc_) + 1, Complex{});
    for (int j = 0; j <= a.trunc_; ++j) {
        const int order = lead + j;
        sum[static_cast<std::size_t>(j)] = a.coefficient(order) + b.coefficient(order);
    }
    return AsymptoticNumber::normalized(lead, std::move(sum), a.trunc_);
}

AsymptoticNumber operator-(const AsymptoticNumber& a, const AsymptoticNumber& b) {
    return a + (-b);
}

AsymptoticNumber operator*(const AsymptoticNumber& a, const AsymptoticNumber& b) {
    AsymptoticNumber::require_same_truncation(a, b);
    if (a.is_zero() || b.is_zero()) return AsymptoticNumber::zero(a.trunc_);
    const int K = a.trunc_;
    std::vector<Complex> prod(static_cast<std::size_t>(K) + 1, Complex{});
    for (int i = 0; i <= K; ++i) {
        const Complex ai = a.coeffs_[static_cast<std::size_t>(i)];
        if (ai == Complex{}) continue;
        for (int j = 0; i + j <= K; ++j) {
            prod[static_cast<std::size_t>(i + j)] += ai * b.coeffs_[static_cast<std::size_t>(j)];
        }
    }
    return AsymptoticNumber::normalized(a.lead_ + b.lead_, std::move(prod), K);
}

AsymptoticNumber operator/(const AsymptoticNumber& a, const AsymptoticNumber& b) {
    AsymptoticNumber::require_same_truncation(a, b);
    if (b.is_zero()) throw std::domain_error("division by zero asymptotic number");
    if (a.is_zero()) return AsymptoticNumber::zero(a.trunc_);
    const int K = a.trunc_;
    // Standard series division: q[m] = (a[m] - sum_{j=1..m} b[j] q[m-j]) / b[0].
    std::vector<Complex> q(static_cast<std::size_t>(K) + 1, Complex{});
    const Complex b0 = b.coeffs_.front();
    for (int m = 0; m <= K; ++m) {
        Complex acc = a.coeffs_[static_cast<std::size_t>(m)];
        for (int j = 1; j <= m; ++j) {
            acc -= b.coeffs_[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(m - j)];
        }
        q[static_cast<std::size_t>(m)] = acc / b0;
    }
    return AsymptoticNumber::normalized(a.lead_ - b.lead_, std::move(q), K);
}

namespace {

enum class Elementary { Sin, Cos, Exp };

AsymptoticNumber compose(Elementary f, const AsymptoticNumber& s) {
    if (!s.is_finite())
        throw std::domain_error("elementary function of an infinite number");
    const int K = s.truncation_order();
    const AsymptoticNumber one = AsymptoticNumber::constant(1.0, K);

    const Complex c = s.coefficient(0);
    const AsymptoticNumber h = s - AsymptoticNumber::constant(c, K);

    // Taylor sums in the infinitesimal part h (leading order >= 1, so powers
    // beyond h^K fall outside every window anchored at order 0).
    AsymptoticNumber even_sum = one;                          // 1 - h^2/2! + h^4/4! - ...
    AsymptoticNumber odd_sum = AsymptoticNumber::zero(K);     // h - h^3/3! + h^5/5! - ...
    AsymptoticNumber exp_sum = one;                           // sum h^m/m!
    AsymptoticNumber term = one;
    for (int m = 1; m <= K && !h.is_zero(); ++m) {
        term = term * h / AsymptoticNumber::constant(static_cast<double>(m), K);
        exp_sum = exp_sum + term;
        const double sign = (m % 4 == 1 || m % 4 == 0) ? 1.0 : -1.0;
        const AsymptoticNumber signed_term =
            sign > 0 ? term : -term;
        if (m % 2 == 1)
            odd_sum = odd_sum + signed_term;
        else
            even_sum = even_sum + signed_term;
    }

    switch (f) {
        case Elementary::Exp:
            return AsymptoticNumber::constant(std::exp(c), K) * exp_sum;
        case Elementary::Sin:
            // sin(c+h) = sin c * cos h + cos c * sin h
            return AsymptoticNumber::constant(std::sin(c), K) * even_sum +
                   AsymptoticNumber::constant(std::cos(c), K) * odd_sum;
        case Elementary::Cos:
            // cos(c+h) = cos c * cos h - sin c * sin h
            return AsymptoticNumber::constant(std::cos(c), K) * even_sum -
                   AsymptoticNumber::constant(std::sin(c), K) * odd_sum;
    }
    throw std::logic_error("unreachable");
}

}  // namespace

AsymptoticNumber sin(const AsymptoticNumber& s) { return compose(Elementary::Sin, s); }
AsymptoticNumber cos(const AsymptoticNumber& s) { return compose(Elementary::Cos, s); }
AsymptoticNumber exp(const AsymptoticNumber& s) { return compose(Elementary::Exp, s); }

Complex standard_part(const AsymptoticNumber& s) {
    if (!s.is_finite()) throw std::domain_error("infinite number has no shadow");
    return s.coefficient(0);
}

RelationResult infinitely_close_checked(const AsymptoticNumber& z, const AsymptoticNumber& w) {
    if (!z.is_finite() || !w.is_finite())
        throw std::domain_error("infinite closeness requires finite operands");
    const AsymptoticNumber d = z - w;
    if (d.is_zero()) {
        // Every computed coefficient of z - w vanished. Decisive only when
        // both operands were literal zeros; otherwise invisible higher-order
        // terms could exist (they would not change the verdict here, but the
        // window cannot certify the difference itself).
        return {true, z.is_zero() && w.is_zero()};
    }
    return {d.leading_order() >= 1, true};
}

bool infinitely_close(const AsymptoticNumber& z, const AsymptoticNumber& w) {
    return infinitely_close_checked(z, w).holds;
}

RelationResult adequal_checked(const AsymptoticNumber& z, const AsymptoticNumber& w) {
    if (z.is_zero() && w.is_zero()) return {true, true};
    if (z.is_zero() || w.is_zero()) return {false, true};
    const AsymptoticNumber ratio = z / w;
    if (!ratio.is_finite()) return {false, true};
    const AsymptoticNumber d = ratio - AsymptoticNumber::constant(1.0, ratio.truncation_order());
    if (d.is_zero()) return {true, false};  // ratio is 1 through the whole window
    return {d.leading_order() >= 1, true};
}

bool adequal(const AsymptoticNumber& z, const AsymptoticNumber& w) {
    return adequal_checked(z, w).holds;
}

std::string AsymptoticNumber::to_string(int significant_digits) const {
    if (is_zero()) return "0";
    auto fmt = [significant_digits](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
        return std::string(buf);
    };
    auto power = [](int order) -> std::string {
        if (order == 0) return "";
        if (order == 1) return "eps";
        return "eps^" + std::to_string(order);
    };

    std::string out;
    for (int j = 0; j <= trunc_; ++j) {
        const Complex c = coeffs_[static_cast<std::size_t>(j)];
        if (c == Complex{}) continue;
        const int order = lead_ + j;
        std::string coeff_txt;
        bool negative = false;
        if (c.imag() == 0.0) {
            negative = c.real() < 0.0;
            coeff_txt = fmt(std::abs(c.real()));
        } else {
            coeff_txt = "(" + fmt(c.real()) + (c.imag() < 0 ? "-" : "+") +
                        fmt(std::abs(c.imag())) + "i)";
        }
        const std::string pow_txt = power(order);
        std::string term = pow_txt.empty()
                               ? coeff_txt
                               : (coeff_txt == "1" && !negative ? pow_txt : coeff_txt + "*" + pow_txt);
        if (out.empty()) {
            out = negative ? "-" + term : term;
        } else {
            out += negative ? " - " + term : " + " + term;
        }
    }
    return out;
}

}  // namespace hyperwalk::asymptotic
