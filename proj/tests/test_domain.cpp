// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "primcalc/domain.hpp"
#include "primcalc/error.hpp"

using namespace primcalc;

namespace {

Window win(const char* lo, const char* hi) { return make_window(parse_real(lo), parse_real(hi)); }

}  // namespace

TEST(Domain, ParseRealAcceptsExactTokens) {
    EXPECT_EQ(parse_real("4pi").to_string(), "4*pi");
    EXPECT_EQ(parse_real("-8*pi").to_string(), "-8*pi");
    EXPECT_EQ(parse_real("3*pi/2").to_string(), "3*pi/2");
    EXPECT_EQ(parse_real("2.5").to_string(), "5/2");
    EXPECT_FALSE(parse_real("-inf").is_finite());
    EXPECT_THROW(parse_real("x"), Error);
}

TEST(Domain, WindowMustBeOrdered) {
    EXPECT_THROW(make_window(Real::integer(2), Real::integer(1)), Error);
    EXPECT_EQ(Window{}.to_string(), "(-8*pi, 8*pi)");
}

TEST(Domain, NaturalDomainOfTheWeierstrassIntegrandIsExact) {
    DomainSet d = natural_domain(parse_expr("1/(1-cos(x)+sin(x))"), win("0", "4pi"));
    EXPECT_EQ(d.to_string(), "]0,3*pi/2[ ∪ ]3*pi/2,2*pi[ ∪ ]2*pi,7*pi/2[ ∪ ]7*pi/2,4*pi[");
    // Oracle: the complement inside the window is exactly the hand-solved zero set.
    auto zeros = oracle::weierstrass_denominator_zeros(0.0, 4 * oracle::kPi);
    ASSERT_EQ(d.parts().size(), zeros.size() + 1);
    for (std::size_t i = 1; i < d.parts().size(); ++i) EXPECT_NEAR(d.parts()[i].lo.value(), zeros[i - 1], 1e-12);
}

TEST(Domain, ClosedEndpointsFromSqrtAndArcsin) {
    EXPECT_EQ(natural_domain(parse_expr("sqrt(1-x^2)")).to_string(), "[-1,1]");
    EXPECT_EQ(natural_domain(parse_expr("arcsin(x)/2 + x*sqrt(1-x^2)/2")).to_string(), "[-1,1]");
    EXPECT_EQ(natural_domain(parse_expr("ln(x)"), win("-2", "2")).to_string(), "]0,2[");
    EXPECT_EQ(natural_domain(parse_expr("1/x"), win("-5", "5")).to_string(), "]-5,0[ ∪ ]0,5[");
}

TEST(Domain, EmptyDomainThrows) {
    try {
        natural_domain(parse_expr("sqrt(-1-x^2)"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyDomain);
    }
}

TEST(Domain, SetOperations) {
    Window w = win("-5", "5");
    DomainSet a = natural_domain(parse_expr("1/x"), w);
    DomainSet b = natural_domain(parse_expr("sqrt(x+1)"), w);
    EXPECT_EQ(intersect(a, b).to_string(), "[-1,0[ ∪ ]0,5[");
    EXPECT_EQ(unite(a, b).to_string(), "]-5,5[");
    EXPECT_EQ(remove_points(b, {Real::integer(2)}).to_string(), "[-1,2[ ∪ ]2,5[");
    EXPECT_THROW(intersect(a, DomainSet::full(win("-1", "1"))), Error);
}

TEST(Domain, ComparisonGivesAWitness) {
    Window w = win("0", "4pi");
    DomainSet f = natural_domain(parse_expr("1/(1-cos(x)+sin(x))"), w);
    DomainSet F = natural_domain(parse_expr("ln(abs(sin(x)/(1+cos(x)+sin(x))))"), w);
    auto cmp = domains_equal(F, f);
    EXPECT_FALSE(cmp.equal);
    ASSERT_TRUE(cmp.witness);
    EXPECT_EQ(cmp.witness->to_string(), "pi");
    EXPECT_TRUE(is_subset(F, f));
    EXPECT_FALSE(is_subset(f, F));
    // Oracle: F's domain misses exactly the breaks of its rule.
    for (double p : oracle::textbook_primitive_breaks(0.0, 4 * oracle::kPi)) EXPECT_FALSE(F.contains(p)) << p;
}

TEST(Domain, StandardnessClauses) {
    Window w = win("-5", "5");
    auto raw = DomainSet::from_parts_raw(
        {Interval::make(Real::integer(0), Real::integer(1), false, true),
         Interval::make(Real::integer(1), Real::integer(2), false, false)},
        w);
    StandardCheck sc = is_standard(raw);
    EXPECT_FALSE(sc.standard);
    ASSERT_FALSE(sc.violations.empty());
    EXPECT_EQ(sc.violations.front().clause, "separated");
    EXPECT_TRUE(is_standard(natural_domain(parse_expr("1/x"), w)).standard);
}

TEST(Domain, MemberOfExactEndpoints) {
    DomainSet d = natural_domain(parse_expr("sqrt(1-x^2)"));
    EXPECT_TRUE(d.contains(Real::integer(1)));
    EXPECT_TRUE(d.contains(Real::integer(-1)));
    EXPECT_FALSE(d.contains(Real::rational(Rational(1000001, 1000000))));
    EXPECT_EQ(d.component_of(0.3), std::optional<std::size_t>(0));
}
