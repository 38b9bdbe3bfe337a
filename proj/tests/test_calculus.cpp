// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "oracles.hpp"
#include "primcalc/calculus.hpp"
#include "primcalc/error.hpp"

using namespace primcalc;

namespace {

Window win(const char* lo, const char* hi) { return make_window(parse_real(lo), parse_real(hi)); }

std::string joined(const std::vector<Real>& xs) {
    std::string s;
    for (const Real& x : xs) s += (s.empty() ? "" : ", ") + x.to_string();
    return s;
}

}  // namespace

TEST(Calculus, SymbolicDerivativeAgreesWithStencil) {
    const char* cases[] = {"x*cos(x)", "cos(x^2)*x", "exp(cos(x))*sin(x)", "ln(x+sqrt(x^2+1))",
                           "arcsin(x)/2 + x*sqrt(1-x^2)/2", "ln(abs(tan(x)+sec(x)))", "arctan(x)*x^3",
                           "ln(abs(sin(x)/(1+cos(x)+sin(x))))"};
    for (const char* t : cases) {
        Expr e = parse_expr(t);
        Expr d = differentiate(e);
        for (double x : oracle::grid(-0.9, 0.9, 40)) {
            auto v = eval_at(d, x);
            auto f = [&e](double y) { return *eval_at(e, y); };
            if (!eval_at(e, x - 0.01) || !eval_at(e, x + 0.01)) continue;
            ASSERT_TRUE(v) << t << " at " << x;
            EXPECT_NEAR(*v, oracle::derivative(f, x, 1e-4), 1e-6 * (1 + std::abs(*v))) << t << " at " << x;
        }
    }
}

TEST(Calculus, ChainRuleShape) {
    EXPECT_EQ(format_expr(differentiate(parse_expr("sin(x)"))), "cos(x)");
    EXPECT_EQ(format_expr(differentiate(parse_expr("tan(x)"))), "sec(x)^2");
}

TEST(Calculus, NumericDerivative) {
    EXPECT_NEAR(numeric_derivative(parse_expr("exp(x)"), 1.0), std::exp(1.0), 1e-8);
    try {
        numeric_derivative(parse_expr("sqrt(x)"), 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UndefinedNear);
    }
}

TEST(Calculus, QuadratureAgainstClosedFormsAndSimpson) {
    double v = quadrature(parse_expr("exp(cos(x))*sin(x)"), Real::integer(0), Real::pi_multiple(Rational(3, 4)));
    EXPECT_NEAR(v, oracle::exp_cos_sin_integral(), 1e-10);
    double q = quadrature(parse_expr("sqrt(1-x^2)"), Real::integer(-1), Real::integer(1));
    EXPECT_NEAR(q, oracle::kPi / 2, 1e-9);
    auto g = [](double x) { return std::cos(x * x) * x; };
    EXPECT_NEAR(quadrature(parse_expr("cos(x^2)*x"), Real::integer(0), Real::integer(3)), oracle::simpson(g, 0, 3),
                1e-9);
    // Reversed limits flip the sign.
    EXPECT_NEAR(quadrature(parse_expr("x"), Real::integer(2), Real::integer(0)), -2.0, 1e-12);
}

TEST(Calculus, QuadratureRejectsSegmentsLeavingTheDomain) {
    try {
        quadrature(parse_expr("1/x"), Real::integer(-1), Real::integer(1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DomainViolation);
    }
}

TEST(Calculus, ZerosOfPhiAndPsiAreExact) {
    auto phi = find_zeros(parse_expr("1-cos(x)+sin(x)"), make_window(Real::from_double(-0.1), Real::pi_multiple(Rational(4))));
    EXPECT_EQ(joined(phi), "0, 3*pi/2, 2*pi, 7*pi/2");
    auto psi = find_zeros(parse_expr("1+cos(x)+sin(x)"), win("0", "4pi"));
    EXPECT_EQ(joined(psi), "pi, 3*pi/2, 3*pi, 7*pi/2");
    // Oracle cross-check of phi.
    auto ref = oracle::weierstrass_denominator_zeros(-0.1, 4 * oracle::kPi);
    ASSERT_EQ(phi.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(phi[i].value(), ref[i], 1e-12);
}

TEST(Calculus, TangentialZero) {
    auto z = find_zeros(parse_expr("(x-1)^2"), win("-3", "3"));
    ASSERT_EQ(z.size(), 1u);
    EXPECT_EQ(z[0].to_string(), "1");
}

TEST(Calculus, SignCharts) {
    SignChart a = sign_chart(parse_expr("sin(x)+cos(x)"), win("0", "2pi"));
    EXPECT_EQ(joined(a.breakpoints), "3*pi/4, 7*pi/4");
    ASSERT_EQ(a.signs.size(), 3u);
    EXPECT_EQ(a.signs[0], Sign::Positive);
    EXPECT_EQ(a.signs[1], Sign::Negative);
    EXPECT_EQ(a.signs[2], Sign::Positive);
    SignChart b = sign_chart(parse_expr("cos(x)-sin(x)"), win("0", "2pi"));
    EXPECT_EQ(joined(b.breakpoints), "pi/4, 5*pi/4");
}

TEST(Calculus, ContinuityClass) {
    Expr f = parse_expr("1/(1-cos(x)+sin(x))");
    EXPECT_EQ(continuity_class(f, natural_domain(f, win("0", "4pi"))), Continuity::C1);
    Expr s = parse_expr("sqrt(1-x^2)");
    EXPECT_EQ(continuity_class(s, natural_domain(s)), Continuity::Continuous);
    EXPECT_EQ(continuity_class(parse_expr("1/x"), DomainSet::full(win("-1", "1"))), Continuity::Unknown);
}

TEST(Calculus, OneSidedLimitsAtTheGapPoints) {
    Expr F = parse_expr("ln(abs(sin(x)/(1+cos(x)+sin(x))))");
    for (double p : {oracle::kPi, 3 * oracle::kPi}) {
        auto l = one_sided_limit(F, p, -1);
        auto r = one_sided_limit(F, p, 1);
        ASSERT_TRUE(l && r);
        EXPECT_NEAR(*l, 0.0, 1e-7);
        EXPECT_NEAR(*r, 0.0, 1e-7);
        auto dl = one_sided_derivative(F, p, 0.0, -1);
        ASSERT_TRUE(dl);
        // f(pi) = 1/2.
        EXPECT_NEAR(*dl, 0.5, 1e-5);
    }
}

TEST(Calculus, OneSidedDerivativeAtSqrtEndpoint) {
    Expr F = parse_expr("arcsin(x)/2 + x*sqrt(1-x^2)/2");
    auto d = one_sided_derivative(F, 1.0, oracle::kPi / 4, -1);
    ASSERT_TRUE(d);
    EXPECT_NEAR(*d, 0.0, 1e-5);
}

TEST(Calculus, ZerosAcrossTheCorpusAreRoots) {
    for (const auto& item : corpus::integrands()) {
        Expr f = parse_expr(item.f);
        for (const Real& z : find_zeros(f, item.window)) {
            auto v = eval_at(f, z.value());
            ASSERT_TRUE(v) << item.f;
            EXPECT_NEAR(*v, 0.0, 1e-9) << item.f << " at " << z.to_string();
        }
    }
}
