// SPDX-License-Identifier: Apache-2.0
// Prints one line per acceptance criterion; exits nonzero if any fails.
#include <cstdio>
#include <exception>

#include "criteria.hpp"

int main() {
    using Fn = criteria::Result (*)();
    const Fn all[] = {criteria::criterion1, criteria::criterion2, criteria::criterion3, criteria::criterion4,
                      criteria::criterion5, criteria::criterion6, criteria::criterion7, criteria::criterion8,
                      criteria::criterion9, criteria::criterion10};
    int failed = 0;
    for (int i = 0; i < 10; ++i) {
        criteria::Result r;
        try {
            r = all[i]();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %d: %s - %s\n", i + 1, r.pass ? "PASS" : "FAIL", r.detail.c_str());
        failed += r.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
