// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "primcalc/error.hpp"
#include "primcalc/primitives.hpp"
#include "primcalc/rules.hpp"

using namespace primcalc;

namespace {

Window win(const char* lo, const char* hi) { return make_window(parse_real(lo), parse_real(hi)); }

PrimitiveFamily recip_family() {
    Fn f = Fn::natural(parse_expr("1/x"), win("-5", "5"));
    return family_from_base(Fn::make(parse_expr("ln(abs(x))"), f.domain()), f);
}

}  // namespace

TEST(Primitives, FnRejectsRulesUndefinedOnTheirDomain) {
    EXPECT_THROW(Fn::make(parse_expr("1/x"), DomainSet::full(win("-1", "1"))), Error);
    Fn f = Fn::natural(parse_expr("sqrt(1-x^2)"));
    EXPECT_EQ(f.domain().to_string(), "[-1,1]");
    EXPECT_TRUE(f(1.0));
    EXPECT_FALSE(f(1.5));
}

TEST(Primitives, IsPrimitiveAcceptsTheTableAnswers) {
    Fn f = Fn::natural(parse_expr("x*cos(x)"));
    Fn F = Fn::make(parse_expr("x*sin(x)+cos(x)"), f.domain());
    CheckReport r = is_primitive(F, f);
    EXPECT_TRUE(r.passed()) << r.message;
    // The wrong sign gets a derivative mismatch with a witness.
    Fn G = Fn::make(parse_expr("x*sin(x)-cos(x)"), f.domain());
    CheckReport bad = is_primitive(G, f);
    EXPECT_FALSE(bad.passed());
    EXPECT_EQ(bad.reason, Reason::DerivativeMismatch);
    EXPECT_TRUE(bad.witness.has_value());
}

TEST(Primitives, IsPrimitiveChecksClosedEndpointsOneSided) {
    Fn f = Fn::natural(parse_expr("sqrt(1-x^2)"));
    Fn F = Fn::make(parse_expr("arcsin(x)/2 + x*sqrt(1-x^2)/2"), f.domain());
    CheckReport r = is_primitive(F, f);
    ASSERT_TRUE(r.passed()) << r.message;
    int endpoint_checks = 0;
    for (const Evidence& e : r.evidence)
        if (e.hypothesis.find("one-sided") != std::string::npos) ++endpoint_checks;
    EXPECT_EQ(endpoint_checks, 2);
}

TEST(Primitives, TextbookAnswerHasTheWrongDomain) {
    Window w = win("0", "4pi");
    Fn f = Fn::natural(parse_expr("1/(1-cos(x)+sin(x))"), w);
    Fn F = Fn::natural(parse_expr("ln(abs(sin(x)/(1+cos(x)+sin(x))))"), w);
    CheckReport r = is_primitive(F, f);
    EXPECT_FALSE(r.passed());
    EXPECT_EQ(r.reason, Reason::DomainMismatch);
    ASSERT_TRUE(r.witness);
    EXPECT_EQ(r.witness->to_string(), "pi");
}

TEST(Primitives, MemberAndContainsRoundTrip) {
    PrimitiveFamily fam = recip_family();
    EXPECT_EQ(fam.arity(), 2u);
    Fn m = member(fam, {Real::pi_multiple(Rational(-1)), Real::integer(2)});
    EXPECT_NEAR(*m(-1.0), -oracle::kPi, 1e-12);
    EXPECT_NEAR(*m(1.0), 2.0, 1e-12);
    Containment c = contains(fam, m);
    ASSERT_TRUE(c.report.passed()) << c.report.message;
    ASSERT_EQ(c.constants.size(), 2u);
    EXPECT_EQ(c.constants[0].to_string(), "-pi");
    EXPECT_EQ(c.constants[1].to_string(), "2");
    EXPECT_THROW(member(fam, {Real::integer(1)}), Error);
}

TEST(Primitives, ContainsRecoversConstantsOfAPiecewiseRepresentative) {
    PrimitiveFamily fam = recip_family();
    Fn phi = Fn::piecewise({parse_expr("ln(-x)-pi"), parse_expr("ln(x)+2")}, fam.base().domain());
    Containment c = contains(fam, phi);
    ASSERT_TRUE(c.report.passed());
    EXPECT_EQ(c.constants[0].to_string(), "-pi");
    EXPECT_EQ(c.constants[1].to_string(), "2");
}

TEST(Primitives, ContainsRejectsANonConstantDifference) {
    PrimitiveFamily fam = recip_family();
    Fn phi = Fn::make(parse_expr("ln(abs(x))+x"), fam.base().domain());
    Containment c = contains(fam, phi);
    EXPECT_FALSE(c.report.passed());
    EXPECT_EQ(c.report.reason, Reason::NonConstantDifference);
    ASSERT_TRUE(c.report.witness && c.report.witness2);
    double a = c.report.witness->value();
    double b = c.report.witness2->value();
    // Oracle: phi - F = x, so the two witnesses must differ.
    EXPECT_GT(std::abs(a - b), 1e-6);
}

TEST(Primitives, ClassArithmetic) {
    Fn f = Fn::natural(parse_expr("2*x"), win("-3", "3"));
    PrimitiveFamily p = family_from_base(Fn::make(parse_expr("x^2"), f.domain()), f);
    PrimitiveFamily half = class_scale(Real::rational(Rational(1, 2)), p);
    EXPECT_TRUE(is_primitive(half.base(), half.target()).passed());
    EXPECT_NEAR(*half.base()(2.0), 2.0, 1e-12);
    EXPECT_THROW(class_scale(Real::integer(0), p), Error);

    Fn g = Fn::natural(parse_expr("cos(x)"), win("-3", "3"));
    PrimitiveFamily q = family_from_base(Fn::make(parse_expr("sin(x)"), g.domain()), g);
    PrimitiveFamily s = class_add(p, q);
    EXPECT_NEAR(*s.target()(1.0), 2.0 + std::cos(1.0), 1e-12);
    EXPECT_TRUE(is_primitive(s.base(), s.target()).passed());
    PrimitiveFamily d = class_sub(p, q);
    EXPECT_NEAR(*d.base()(1.0), 1.0 - std::sin(1.0), 1e-12);
}

TEST(Primitives, HasPrimitive) {
    EXPECT_TRUE(has_primitive(Fn::natural(parse_expr("1/x"), win("-5", "5"))).passed());
    // A jump plug breaks continuity.
    Fn jump = Fn::make(parse_expr("x"), DomainSet::full(win("-1", "1")), {{Real::integer(0), Real::integer(1)}});
    CheckReport r = has_primitive(jump);
    EXPECT_FALSE(r.passed());
    EXPECT_EQ(r.reason, Reason::HypothesisUnverified);
}

TEST(Primitives, FamilyPrintsOneConstantPerComponent) {
    EXPECT_EQ(recip_family().to_string(), "ln(abs(x)) + c1 if x in ]-5,0[; ln(abs(x)) + c2 if x in ]0,5[");
}

TEST(Primitives, GapFilledFamilyIsAPrimitive) {
    Window w = win("0", "4pi");
    Fn f = Fn::natural(parse_expr("1/(1-cos(x)+sin(x))"), w);
    Derivation d = antiderive(f);
    const Fn& F = d.family.base();
    ASSERT_EQ(F.plugs().size(), 2u);
    EXPECT_EQ(F.plugs()[0].point.to_string(), "pi");
    EXPECT_EQ(F.plugs()[1].point.to_string(), "3*pi");
    EXPECT_EQ(F.plugs()[0].value.to_string(), "0");
    EXPECT_TRUE(is_primitive(F, f).passed());
    // Oracle: F(pi) equals the common one-sided limit 0.
    EXPECT_NEAR(*F(oracle::kPi - 1e-6), 0.0, 1e-5);
}
