// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "oracles.hpp"
#include "primcalc/error.hpp"
#include "primcalc/rules.hpp"

using namespace primcalc;

namespace {

Window win(const char* lo, const char* hi) { return make_window(parse_real(lo), parse_real(hi)); }

DomainSet closed(const char* lo, const char* hi, const Window& w) {
    return DomainSet::from_parts({Interval::make(parse_real(lo), parse_real(hi), true, true)}, w);
}

DomainSet open(const char* lo, const char* hi, const Window& w) {
    return DomainSet::from_parts({Interval::make(parse_real(lo), parse_real(hi), false, false)}, w);
}

const TraceStep* find_step(const RuleTrace& t, const std::string& rule) {
    for (const TraceStep& s : t.steps)
        if (s.rule == rule) return &s;
    return nullptr;
}

}  // namespace

TEST(Rules, BaseTable) {
    auto F = base_table(parse_expr("sec(x)^2"), open("-pi/2", "pi/2", win("-2", "2")));
    ASSERT_TRUE(F);
    EXPECT_EQ(format_expr(F->rule()), "tan(x)");
    EXPECT_FALSE(base_table(parse_expr("exp(x^2)"), DomainSet::full(win("-1", "1"))));
}

TEST(Rules, ReciprocalHasOneConstantPerComponent) {
    Derivation d = antiderive(Fn::natural(parse_expr("1/x"), win("-5", "5")));
    EXPECT_EQ(d.family.arity(), 2u);
    EXPECT_EQ(format_expr(d.family.base().rule()), "ln(abs(x))");
    EXPECT_TRUE(d.trace.contains_rule("component_stitch"));
}

TEST(Rules, ByPartsOnXCosX) {
    Fn f = Fn::natural(parse_expr("x*cos(x)"));
    Derivation d = antiderive(f);
    EXPECT_EQ(d.family.base().rule(), parse_expr("x*sin(x)+cos(x)"));
    EXPECT_TRUE(d.trace.contains_rule("by_parts"));
    Derivation direct = by_parts(Fn::natural(parse_expr("x")), Fn::natural(parse_expr("sin(x)")));
    EXPECT_EQ(format_expr(direct.family.base().rule()), "x*sin(x) + cos(x)");
}

TEST(Rules, ForwardSubstitution) {
    Derivation d = antiderive(Fn::natural(parse_expr("cos(x^2)*x")));
    EXPECT_EQ(format_expr(d.family.base().rule()), "sin(x^2)/2");
    EXPECT_EQ(d.family.arity(), 1u);
    Derivation direct = subst_forward(Fn::natural(parse_expr("cos(x)")), Fn::natural(parse_expr("x^2"), win("-2", "2")));
    EXPECT_EQ(format_expr(direct.family.base().rule()), "sin(x^2)");
    const TraceStep* s = find_step(direct.trace, "subst_forward");
    ASSERT_TRUE(s);
    EXPECT_EQ(s->theorem, "SUBST_FORWARD");
}

TEST(Rules, InverseSubstitutionTraceNamesTheDiffeomorphism) {
    Fn f = Fn::natural(parse_expr("1/sqrt(x^2+1)"));
    Derivation d = antiderive(f);
    EXPECT_EQ(format_expr(d.family.base().rule()), "ln(x+sqrt(x^2+1))");
    const TraceStep* s = find_step(d.trace, "subst_inverse");
    ASSERT_TRUE(s);
    bool named = false;
    for (const Evidence& e : s->evidence)
        named = named || (e.hypothesis == "g' nonvanishing on D_g (diffeomorphism)" &&
                          e.detail.find("tan(x) on ]-pi/2,pi/2[") != std::string::npos);
    EXPECT_TRUE(named);
    for (double x : oracle::grid(-10, 10, 64))
        EXPECT_NEAR(*d.family.base()(x), std::log(x + std::sqrt(x * x + 1)), 1e-10);
}

TEST(Rules, RelaxedSubstitutionOnTheDisc) {
    Derivation d = antiderive(Fn::natural(parse_expr("sqrt(1-x^2)")));
    EXPECT_EQ(d.family.base().rule(), parse_expr("arcsin(x)/2 + x*sqrt(1-x^2)/2"));
    EXPECT_TRUE(d.trace.contains_rule("subst_inverse_relaxed"));
}

TEST(Rules, WeierstrassWithGapFilling) {
    Derivation d = antiderive(Fn::natural(parse_expr("1/(1-cos(x)+sin(x))"), win("0", "4pi")));
    EXPECT_EQ(d.family.arity(), 4u);
    EXPECT_EQ(d.family.base().plugs().size(), 2u);
    EXPECT_TRUE(d.trace.contains_rule("gap_fill"));
    EXPECT_EQ(format_expr(d.family.base().rule()), "ln(abs(sin(x)/(1+cos(x)+sin(x))))");
}

TEST(Rules, EveryCorpusOutputIsAPrimitive) {
    for (const auto& item : corpus::integrands()) {
        Fn f = Fn::natural(parse_expr(item.f), item.window);
        Derivation d = antiderive(f);
        EXPECT_TRUE(is_primitive(d.family.base(), f).passed()) << item.f;
        EXPECT_EQ(d.family.arity(), f.domain().parts().size()) << item.f;
    }
}

TEST(Rules, UnknownIntegrandCarriesTheTrace) {
    try {
        antiderive(Fn::natural(parse_expr("exp(x^2)"), win("-1", "1")));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RuleNotFound);
    }
}

TEST(Rules, DefiniteIntegral) {
    Fn f = Fn::natural(parse_expr("exp(cos(x))*sin(x)"));
    DefiniteResult r = defint(f, Real::integer(0), Real::pi_multiple(Rational(3, 4)));
    EXPECT_NEAR(r.value, oracle::exp_cos_sin_integral(), 1e-7);
    EXPECT_NEAR(r.cross_check, r.value, 1e-7);
    EXPECT_FALSE(r.fallback);
    EXPECT_TRUE(r.trace.contains_rule("ftc2"));

    DefiniteResult q = defint(Fn::natural(parse_expr("exp(x^2)"), win("-2", "2")), Real::integer(0), Real::integer(1));
    EXPECT_TRUE(q.fallback);
    EXPECT_NEAR(q.value, oracle::simpson([](double x) { return std::exp(x * x); }, 0, 1), 1e-9);

    try {
        defint(Fn::natural(parse_expr("1/x"), win("-5", "5")), Real::integer(-1), Real::integer(1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DomainViolation);
    }
}

TEST(Rules, ChangeOfVariables) {
    Window w = win("-pi", "pi");
    Fn f = Fn::natural(parse_expr("sqrt(1-x^2)"));
    Fn g = Fn::make(parse_expr("sin(x)"), DomainSet::full(w));
    DefiniteResult r = defint_change_of_vars(f, g, Real::integer(0), Real::pi_multiple(Rational(1, 2)));
    EXPECT_NEAR(r.value, oracle::kPi / 4, 1e-9);
    EXPECT_TRUE(r.trace.contains_rule("change_of_variables"));
}

TEST(RuleHypotheses, AssumedClausesAreMarked) {
    Window w = win("-pi", "pi");
    Fn f = Fn::make(parse_expr("sqrt(1-x^2)"), closed("0", "1", Window{}));
    Substitution sine{Fn::make(parse_expr("sin(x)"), closed("-pi/2", "pi/2", w)), Direction::InverseRelaxed,
                      parse_expr("arcsin(x)")};
    try {
        subst_inverse_relaxed(f, sine);
        FAIL();
    } catch (const Error& e) {
        ASSERT_TRUE(e.report() && e.report()->failed_evidence());
        EXPECT_EQ(e.report()->failed_evidence()->hypothesis, "Im_g = D_f");
    }
    RuleOptions opts;
    opts.assume_unverified = true;
    Derivation d = subst_inverse_relaxed(f, sine, opts);
    EXPECT_GE(d.trace.count(EvidenceLevel::Assumed), 1u);
    EXPECT_TRUE(is_primitive(d.family.base(), f).passed());
}
