// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "primcalc/error.hpp"
#include "primcalc/expr.hpp"

using namespace primcalc;

namespace {

const char* kTexts[] = {
    "1/x",
    "x*cos(x)",
    "cos(x^2)*x",
    "exp(cos(x))*sin(x)",
    "1/sqrt(x^2+1)",
    "sqrt(1-x^2)",
    "1/(1-cos(x)+sin(x))",
    "ln(abs(sin(x)/(1+cos(x)+sin(x))))",
    "arcsin(x)/2 + x*sqrt(1-x^2)/2",
    "ln(abs(tan(x)+sec(x)))",
    "-2*sqrt(2)/sqrt(1+tan(x/2)^2)",
    "x^(1/2) + e - 3*pi/2",
    "arctan(x) - -x",
};

}  // namespace

TEST(Expr, PrintParseIsAFixedPoint) {
    for (const char* t : kTexts) {
        Expr e = parse_expr(t);
        Expr again = parse_expr(format_expr(e));
        EXPECT_EQ(again, canonical(e)) << t;
        EXPECT_EQ(format_expr(again), format_expr(e)) << t;
    }
}

TEST(Expr, PrinterSpacesOnlyTopLevelSums) {
    EXPECT_EQ(format_expr(parse_expr("x*sin(x)+cos(x)")), "x*sin(x) + cos(x)");
    EXPECT_EQ(format_expr(parse_expr("ln(x+sqrt(x^2+1))")), "ln(x+sqrt(x^2+1))");
}

TEST(Expr, ParseErrorsCarryOffsetAndExpectedTokens) {
    try {
        parse_expr("sin(x");
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ErrorCode::Syntax);
        EXPECT_EQ(e.offset(), 5u);
        EXPECT_FALSE(e.expected().empty());
    }
    try {
        parse_expr("foo(x)");
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownIdentifier);
        EXPECT_EQ(e.offset(), 0u);
    }
    EXPECT_THROW(parse_expr("x^y"), ParseError);
    EXPECT_THROW(parse_expr(""), ParseError);
}

TEST(Expr, EvaluationFollowsTheUndefinednessRules) {
    EXPECT_FALSE(eval_at(parse_expr("1/x"), 0.0));
    EXPECT_FALSE(eval_at(parse_expr("ln(x)"), 0.0));
    EXPECT_FALSE(eval_at(parse_expr("sqrt(x)"), -1e-3));
    EXPECT_TRUE(eval_at(parse_expr("sqrt(x)"), 0.0));
    EXPECT_FALSE(eval_at(parse_expr("arcsin(x)"), 1.0001));
    EXPECT_FALSE(eval_at(parse_expr("tan(x)"), oracle::kPi / 2));
    EXPECT_FALSE(eval_at(parse_expr("sec(x)"), -oracle::kPi / 2));
    auto v = eval_at(parse_expr("x^(1/2)"), 4.0);
    ASSERT_TRUE(v);
    EXPECT_DOUBLE_EQ(*v, 2.0);
    EXPECT_FALSE(eval_at(parse_expr("x^(1/2)"), -4.0));
}

TEST(Expr, EvaluationMatchesDirectFormulas) {
    Expr f = parse_expr("1/(1-cos(x)+sin(x))");
    for (double x : oracle::grid(0.1, 1.4, 20)) {
        auto v = eval_at(f, x);
        ASSERT_TRUE(v);
        EXPECT_NEAR(*v, 1.0 / (1.0 - std::cos(x) + std::sin(x)), 1e-14);
    }
}

TEST(Expr, SimplifyIsSoundAndPreservesDomains) {
    const char* cases[] = {"(1/2)*(2*sin(x))", "x+0", "0*x+x", "x - x + cos(x)", "-(-x)", "x^1",
                           "2*x + 3*x", "cos(x)*sec(x)", "x/x"};
    for (const char* t : cases) {
        Expr e = parse_expr(t);
        Expr s = simplify_basic(e);
        for (double x : oracle::grid(-6, 6, 256)) {
            auto a = eval_at(e, x);
            auto b = eval_at(s, x);
            ASSERT_EQ(a.has_value(), b.has_value()) << t << " at " << x;
            if (a) EXPECT_NEAR(*a, *b, 1e-12 * (1 + std::abs(*a))) << t;
        }
    }
    EXPECT_EQ(format_expr(simplify_basic(parse_expr("(1/2)*(2*sin(x))"))), "sin(x)");
    EXPECT_EQ(format_expr(simplify_basic(parse_expr("x+0"))), "x");
    // sec is not total, so the product must stay.
    EXPECT_EQ(format_expr(simplify_basic(parse_expr("cos(x)*sec(x)"))), "cos(x)*sec(x)");
}

TEST(Expr, SubstituteComposes) {
    Expr e = substitute(parse_expr("sin(x)+x"), parse_expr("x^2"));
    EXPECT_EQ(format_expr(e), "sin(x^2) + x^2");
}

TEST(Expr, Predicates) {
    EXPECT_TRUE(is_total(parse_expr("x*cos(x)+exp(x)")));
    EXPECT_FALSE(is_total(parse_expr("1/x")));
    EXPECT_TRUE(is_polynomial(parse_expr("3*x^2-2*x+1")));
    EXPECT_FALSE(is_polynomial(parse_expr("x*cos(x)")));
    EXPECT_FALSE(contains_var(parse_expr("pi/2+e")));
    EXPECT_EQ(depth(parse_expr("x")), 0u);
    EXPECT_EQ(depth(parse_expr("ln(abs(sin(x)/(1+cos(x)+sin(x))))")), 6u);
}

TEST(Expr, ConstantValuesStayExact) {
    auto v = constant_value(parse_expr("3*pi/2"));
    ASSERT_TRUE(v);
    EXPECT_EQ(v->to_string(), "3*pi/2");
    auto w = constant_value(parse_expr("1/3+1/6"));
    ASSERT_TRUE(w);
    EXPECT_EQ(w->to_string(), "1/2");
    EXPECT_FALSE(constant_value(parse_expr("x+1")));
}
