#pragma once

// Truncated series arithmetic over a formal infinitesimal eps, together with
// the order-based relations built on top of it:
//
//   - standard_part      : order-0 coefficient of a finite number
//   - infinitely_close   : difference is zero or of order >= 1   (additive)
//   - adequal            : ratio is infinitely close to 1        (multiplicative)
//
// A number is stored as c_0 eps^{k0} + c_1 eps^{k0+1} + ... + c_K eps^{k0+K}
// with complex double coefficients. k0 may be negative (infinite numbers,
// produced only by division). K is fixed per computation context and never
// changes across arithmetic.
//
// Values are immutable after construction and every operation is a pure
// function; concurrent evaluation needs no synchronization.

#include <complex>
#include <string>
#include <vector>

namespace hyperwalk::asymptotic {

using Complex = std::complex<double>;

/// Default truncation order; keeps the eps^2 terms of the pendulum ratio
/// checks visible with several orders of margin.
inline constexpr int kDefaultTruncationOrder = 8;

/// Coefficients below this fraction of the largest coefficient magnitude are
/// flushed to zero during normalization, so leading-order detection does not
/// trip over arithmetic dust.
inline constexpr double kCoefficientFlushRelative = 1e-14;

class AsymptoticNumber {
public:
    /// Canonical zero: empty coefficient list, no leading order.
    [[nodiscard]] static AsymptoticNumber zero(int truncation_order = kDefaultTruncationOrder);

    /// The constant value r (order-0 leading term). r == 0 gives canonical zero.
    [[nodiscard]] static AsymptoticNumber constant(Complex value,
                                                   int truncation_order = kDefaultTruncationOrder);

    /// The formal infinitesimal eps itself.
    [[nodiscard]] static AsymptoticNumber epsilon(int truncation_order = kDefaultTruncationOrder);

    /// scale * eps^order. order may be negative.
    [[nodiscard]] static AsymptoticNumber monomial(Complex scale, int order,
                                                   int truncation_order = kDefaultTruncationOrder);

    /// General constructor. `coeffs[j]` is the coefficient of eps^{leading_order+j}.
    /// The result is normalized: tiny coefficients flushed, leading zeros
    /// stripped (adjusting the leading order), coefficient list sized to K+1.
    [[nodiscard]] static AsymptoticNumber from_coefficients(int leading_order,
                                                            std::vector<Complex> coeffs,
                                                            int truncation_order);

    AsymptoticNumber() = default;  // canonical zero at default truncation

    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
    [[nodiscard]] bool is_finite() const noexcept { return is_zero() || lead_ >= 0; }
    [[nodiscard]] bool is_infinitesimal() const noexcept { return is_zero() || lead_ >= 1; }

    /// Smallest order with nonzero coefficient. Throws std::logic_error on zero.
    [[nodiscard]] int leading_order() const;
    [[nodiscard]] Complex leading_coefficient() const;

    [[nodiscard]] int truncation_order() const noexcept { return trunc_; }

    /// Coefficient of eps^order; 0 outside the stored window.
    [[nodiscard]] Complex coefficient(int order) const noexcept;

    /// Human-readable series, e.g. "1 - 0.16666666666666666*eps^2 + ...".
    [[nodiscard]] std::string to_string(int significant_digits = 17) const;

    [[nodiscard]] AsymptoticNumber operator-() const;

    friend AsymptoticNumber operator+(const AsymptoticNumber& a, const AsymptoticNumber& b);
    friend AsymptoticNumber operator-(const AsymptoticNumber& a, const AsymptoticNumber& b);
    friend AsymptoticNumber operator*(const AsymptoticNumber& a, const AsymptoticNumber& b);
    /// Series division. Throws std::domain_error when b is the canonical zero.
    friend AsymptoticNumber operator/(const AsymptoticNumber& a, const AsymptoticNumber& b);

private:
    AsymptoticNumber(int lead, std::vector<Complex> coeffs, int trunc)
        : lead_(lead), coeffs_(std::move(coeffs)), trunc_(trunc) {}

    static AsymptoticNumber normalized(int lead, std::vector<Complex> raw, int trunc);
    static void require_same_truncation(const AsymptoticNumber& a, const AsymptoticNumber& b);

    int lead_ = 0;                  // meaningful only when coeffs_ nonempty
    std::vector<Complex> coeffs_;   // size trunc_+1 when nonzero, empty when zero
    int trunc_ = kDefaultTruncationOrder;
};

/// Elementary functions of a finite number, exact through the truncation
/// window: the order-0 part is evaluated in closed form and the infinitesimal
/// remainder through its Taylor series. Throw std::domain_error on infinite
/// input (negative leading order).
[[nodiscard]] AsymptoticNumber sin(const AsymptoticNumber& s);
[[nodiscard]] AsymptoticNumber cos(const AsymptoticNumber& s);
[[nodiscard]] AsymptoticNumber exp(const AsymptoticNumber& s);

/// Shadow map: the order-0 coefficient of a finite number.
/// Throws std::domain_error("infinite number has no shadow") when k0 < 0.
[[nodiscard]] Complex standard_part(const AsymptoticNumber& s);

/// Outcome of an order-based relation. `decisive` is false when every
/// computed coefficient of the discriminating quantity vanished at this
/// truncation order, i.e. the verdict rests on terms the window cannot see.
struct RelationResult {
    bool holds = false;
    bool decisive = true;
};

/// z ~ w (infinitely close): z - w is zero or has leading order >= 1.
/// Both operands must be finite; otherwise std::domain_error.
[[nodiscard]] RelationResult infinitely_close_checked(const AsymptoticNumber& z,
                                                      const AsymptoticNumber& w);
[[nodiscard]] bool infinitely_close(const AsymptoticNumber& z, const AsymptoticNumber& w);

/// Adequality: both zero, or z/w infinitely close to 1. Total predicate:
/// exactly one operand zero gives false, an infinite ratio gives false.
[[nodiscard]] RelationResult adequal_checked(const AsymptoticNumber& z,
                                             const AsymptoticNumber& w);
[[nodiscard]] bool adequal(const AsymptoticNumber& z, const AsymptoticNumber& w);

}  // namespace hyperwalk::asymptotic
