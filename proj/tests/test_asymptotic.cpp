#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "hyperwalk/asymptotic.hpp"

using hyperwalk::asymptotic::adequal;
using hyperwalk::asymptotic::adequal_checked;
using hyperwalk::asymptotic::AsymptoticNumber;
using hyperwalk::asymptotic::Complex;
using hyperwalk::asymptotic::infinitely_close;
using hyperwalk::asymptotic::infinitely_close_checked;
using hyperwalk::asymptotic::standard_part;

namespace {

constexpr int kK = 8;

// Independent Taylor oracle: coefficients straight from factorials, no series
// arithmetic involved.
double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// sin(eps) = sum_m (-1)^m eps^{2m+1}/(2m+1)!
double sin_series_coeff(int order) {
    if (order < 1 || order % 2 == 0) return 0.0;
    const int m = (order - 1) / 2;
    return (m % 2 == 0 ? 1.0 : -1.0) / factorial(order);
}

// sin(eps)/eps = sum_m (-1)^m eps^{2m}/(2m+1)!
double sinc_series_coeff(int order) {
    if (order < 0 || order % 2 == 1) return 0.0;
    const int m = order / 2;
    return (m % 2 == 0 ? 1.0 : -1.0) / factorial(order + 1);
}

AsymptoticNumber eps() { return AsymptoticNumber::epsilon(kK); }
AsymptoticNumber cnum(double re, double im = 0.0) {
    return AsymptoticNumber::constant(Complex(re, im), kK);
}

std::mt19937 rng(20240811u);

AsymptoticNumber random_finite(int max_lead = 2) {
    std::uniform_int_distribution<int> lead_dist(0, max_lead);
    std::uniform_real_distribution<double> mag(0.1, 1.5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Complex> c(kK + 1);
    for (auto& v : c) v = Complex(unit(rng), unit(rng));
    c[0] = Complex(mag(rng), unit(rng));  // keep the leading coefficient well away from 0
    return AsymptoticNumber::from_coefficients(lead_dist(rng), std::move(c), kK);
}

double max_abs_coefficient(const AsymptoticNumber& s) {
    if (s.is_zero()) return 0.0;
    double m = 0.0;
    for (int o = s.leading_order(); o <= s.leading_order() + s.truncation_order(); ++o)
        m = std::max(m, std::abs(s.coefficient(o)));
    return m;
}

}  // namespace

TEST_CASE("construction and normalization") {
    auto z = AsymptoticNumber::zero(kK);
    CHECK(z.is_zero());
    CHECK(z.is_finite());
    CHECK(z.is_infinitesimal());

    auto c = cnum(3.0);
    CHECK(c.leading_order() == 0);
    CHECK(c.coefficient(0) == Complex(3.0, 0.0));
    CHECK(c.coefficient(1) == Complex(0.0, 0.0));

    // Leading zeros are stripped and the anchor moves.
    auto shifted = AsymptoticNumber::from_coefficients(0, {0.0, 0.0, 2.0, 1.0}, kK);
    CHECK(shifted.leading_order() == 2);
    CHECK(shifted.coefficient(2) == Complex(2.0, 0.0));
    CHECK(shifted.coefficient(3) == Complex(1.0, 0.0));

    // Dust below the relative flush threshold disappears.
    auto dusty = AsymptoticNumber::from_coefficients(0, {1e-20, 1.0}, kK);
    CHECK(dusty.leading_order() == 1);

    // All-dust input collapses to canonical zero.
    auto alldust = AsymptoticNumber::from_coefficients(0, {0.0, 0.0}, kK);
    CHECK(alldust.is_zero());
}

TEST_CASE("mismatched truncation orders are rejected") {
    auto a = AsymptoticNumber::constant(1.0, 4);
    auto b = AsymptoticNumber::constant(1.0, 8);
    CHECK_THROWS_AS((void)(a + b), std::invalid_argument);
    CHECK_THROWS_AS((void)(a * b), std::invalid_argument);
}

TEST_CASE("arithmetic examples") {
    auto one = cnum(1.0);
    auto e = eps();

    SUBCASE("mul(1+eps, 1-eps) = 1 - eps^2") {
        auto p = (one + e) * (one - e);
        CHECK(p.coefficient(0) == Complex(1.0, 0.0));
        CHECK(p.coefficient(1) == Complex(0.0, 0.0));
        CHECK(p.coefficient(2) == Complex(-1.0, 0.0));
        for (int o = 3; o <= kK; ++o) CHECK(p.coefficient(o) == Complex(0.0, 0.0));
    }

    SUBCASE("div(eps, eps) = 1") {
        auto q = e / e;
        CHECK(q.leading_order() == 0);
        CHECK(q.coefficient(0) == Complex(1.0, 0.0));
        for (int o = 1; o <= kK; ++o) CHECK(q.coefficient(o) == Complex(0.0, 0.0));
    }

    SUBCASE("div(sin(eps), eps) matches the factorial oracle") {
        auto q = hyperwalk::asymptotic::sin(e) / e;
        CHECK(q.leading_order() == 0);
        for (int o = 0; o <= kK - 1; ++o) {
            CHECK(std::abs(q.coefficient(o) - Complex(sinc_series_coeff(o))) < 1e-15);
        }
    }

    SUBCASE("division by canonical zero is an explicit error") {
        CHECK_THROWS_AS((void)(one / AsymptoticNumber::zero(kK)), std::domain_error);
    }

    SUBCASE("division producing an infinite number") {
        auto inv = one / e;
        CHECK(inv.leading_order() == -1);
        CHECK_FALSE(inv.is_finite());
    }
}

TEST_CASE("elementary functions") {
    auto e = eps();

    SUBCASE("sin(eps) against factorial oracle") {
        auto s = hyperwalk::asymptotic::sin(e);
        CHECK(s.leading_order() == 1);
        for (int o = 1; o <= kK; ++o) {
            CHECK(std::abs(s.coefficient(o) - Complex(sin_series_coeff(o))) < 1e-15);
        }
    }

    SUBCASE("exp(0) = 1") {
        auto r = hyperwalk::asymptotic::exp(AsymptoticNumber::zero(kK));
        CHECK(r.coefficient(0) == Complex(1.0, 0.0));
        for (int o = 1; o <= kK; ++o) CHECK(r.coefficient(o) == Complex(0.0, 0.0));
    }

    SUBCASE("exp splits constant and infinitesimal parts") {
        auto r = hyperwalk::asymptotic::exp(cnum(1.0) + e);
        // exp(1+eps) = e * exp(eps)
        for (int o = 0; o <= kK; ++o) {
            const double expect = std::exp(1.0) / factorial(o);
            CHECK(std::abs(r.coefficient(o) - Complex(expect)) < 1e-12 * std::exp(1.0));
        }
    }

    SUBCASE("infinite input is a domain error") {
        auto inf = cnum(1.0) / e;
        CHECK_THROWS_AS((void)hyperwalk::asymptotic::sin(inf), std::domain_error);
    }

    SUBCASE("sin^2 + cos^2 = 1 for randomized finite inputs") {
        for (int trial = 0; trial < 100; ++trial) {
            auto s = random_finite();
            auto residual = hyperwalk::asymptotic::sin(s) * hyperwalk::asymptotic::sin(s) +
                            hyperwalk::asymptotic::cos(s) * hyperwalk::asymptotic::cos(s) -
                            cnum(1.0);
            CHECK(max_abs_coefficient(residual) < 1e-12);
        }
    }
}

TEST_CASE("standard part") {
    auto e = eps();
    CHECK(standard_part(cnum(3.0) + cnum(5.0) * e) == Complex(3.0, 0.0));
    CHECK(standard_part(e) == Complex(0.0, 0.0));
    CHECK(standard_part(AsymptoticNumber::zero(kK)) == Complex(0.0, 0.0));
    CHECK_THROWS_WITH_AS((void)standard_part(cnum(1.0) / e), "infinite number has no shadow",
                         std::domain_error);
}

TEST_CASE("infinitely close") {
    auto e = eps();
    auto zero = AsymptoticNumber::zero(kK);
    CHECK(infinitely_close(e, zero));
    CHECK(infinitely_close(cnum(1.0) + e, cnum(1.0)));
    CHECK_FALSE(infinitely_close(cnum(1.0), cnum(2.0)));
    CHECK_THROWS_AS((void)infinitely_close(cnum(1.0) / e, cnum(1.0)), std::domain_error);
}

TEST_CASE("adequality") {
    auto e = eps();
    auto zero = AsymptoticNumber::zero(kK);

    CHECK(adequal(e, e + e * e));                        // ratio 1 + eps
    CHECK(adequal(hyperwalk::asymptotic::sin(e), e));    // sine asymptotic to identity
    CHECK_FALSE(adequal(e, cnum(2.0) * e));              // ratio 1/2
    CHECK(adequal(zero, zero));
    CHECK_FALSE(adequal(e, zero));                       // one-sided zero: false, not an error
    CHECK_FALSE(adequal(zero, e));
    CHECK_FALSE(adequal(cnum(1.0), e));                  // infinite ratio
}

TEST_CASE("truncation-window diagnostics") {
    auto e = eps();
    // eps and eps + eps^{K+1} are indistinguishable at this truncation: the
    // discriminating quantity has no visible coefficient.
    auto tail = AsymptoticNumber::monomial(1.0, kK + 2, kK);
    auto r1 = adequal_checked(e, e + tail * e);  // perturbation beyond the ratio window
    CHECK(r1.holds);
    CHECK_FALSE(r1.decisive);

    auto r2 = infinitely_close_checked(cnum(1.0) + e, cnum(1.0) + e);
    CHECK(r2.holds);
    CHECK_FALSE(r2.decisive);  // identical nonzero operands: difference invisible

    auto r3 = infinitely_close_checked(AsymptoticNumber::zero(kK), AsymptoticNumber::zero(kK));
    CHECK(r3.holds);
    CHECK(r3.decisive);

    auto r4 = adequal_checked(e, cnum(2.0) * e);
    CHECK_FALSE(r4.holds);
    CHECK(r4.decisive);
}

TEST_CASE("relation invariances (randomized)") {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    SUBCASE("adequality is invariant under multiplication by a constant") {
        for (int trial = 0; trial < 50; ++trial) {
            auto z = random_finite();
            auto w = random_finite();
            auto c = cnum(unit(rng) + 2.0, unit(rng));  // nonzero constant
            CHECK(adequal(z, w) == adequal(c * z, c * w));
        }
    }

    SUBCASE("infinite closeness is invariant under addition of a constant") {
        for (int trial = 0; trial < 50; ++trial) {
            auto z = random_finite();
            auto w = random_finite();
            auto c = cnum(unit(rng), unit(rng));
            CHECK(infinitely_close(z, w) == infinitely_close(z + c, w + c));
        }
    }

    SUBCASE("adequal implies infinitely close on infinitesimals; converse fails") {
        auto e = eps();
        auto z = e;
        auto w = e + e * e;
        REQUIRE(adequal(z, w));
        CHECK(infinitely_close(z, w));
        // Witness pair: infinitely close but not adequal.
        CHECK(infinitely_close(e, cnum(2.0) * e));
        CHECK_FALSE(adequal(e, cnum(2.0) * e));
    }

    SUBCASE("on appreciable numbers the relations coincide") {
        for (int trial = 0; trial < 50; ++trial) {
            auto z = random_finite(0);
            auto w = random_finite(0);
            REQUIRE(z.leading_order() == 0);
            REQUIRE(w.leading_order() == 0);
            CHECK(adequal(z, w) == infinitely_close(z, w));
        }
    }
}

TEST_CASE("field axioms hold through the truncation window (randomized)") {
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_finite();
        auto b = random_finite();
        auto c = random_finite();

        auto assoc = (a * b) * c - a * (b * c);
        CHECK(max_abs_coefficient(assoc) < 1e-12);

        auto distrib = a * (b + c) - (a * b + a * c);
        CHECK(max_abs_coefficient(distrib) < 1e-12);
    }

    // Multiplicative inverses are checked on well-conditioned inputs: the
    // division recurrence amplifies tail-to-leading coefficient ratios.
    std::uniform_real_distribution<double> tail(-0.4, 0.4);
    std::uniform_real_distribution<double> head(0.8, 1.6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Complex> c(kK + 1);
        for (auto& v : c) v = Complex(tail(rng), tail(rng));
        c[0] = Complex(head(rng), tail(rng));
        auto a = AsymptoticNumber::from_coefficients(0, std::move(c), kK);
        auto inv = a * (cnum(1.0) / a) - cnum(1.0);
        CHECK(max_abs_coefficient(inv) < 1e-12);
    }
}

TEST_CASE("series rendering") {
    auto e = eps();
    auto s = cnum(1.0) - e * e / cnum(6.0);
    CHECK(s.to_string(6) == "1 - 0.166667*eps^2");
    CHECK(AsymptoticNumber::zero(kK).to_string() == "0");
    CHECK(e.to_string() == "eps");
}
