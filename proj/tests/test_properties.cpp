// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "criteria.hpp"

TEST(Properties, RuleOutputsPassPostVerification) {
    auto r = criteria::post_verification();
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Properties, MemberContainsRoundTrip) {
    auto r = criteria::member_round_trip(200);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Properties, SimplifyIsSoundOnTheCorpus) {
    auto r = criteria::simplify_soundness(256);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Properties, Ftc2Coherence) {
    auto r = criteria::ftc2_coherence(5);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Properties, EachHypothesisClauseRejects) {
    for (const auto& c : criteria::rejection_cases()) {
        SCOPED_TRACE(c.theorem);
        EXPECT_EQ(criteria::rejection(c.run), c.expected);
    }
}
