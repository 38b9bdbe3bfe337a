// SPDX-License-Identifier: Apache-2.0
#pragma once

// The worked integrands, each with the window it is studied on.

#include <string>
#include <vector>

#include "primcalc/domain.hpp"

namespace corpus {

struct Item {
    std::string f;
    primcalc::Window window;
};

inline primcalc::Window window(const char* lo, const char* hi) {
    return primcalc::make_window(primcalc::parse_real(lo), primcalc::parse_real(hi));
}

inline std::vector<Item> integrands() {
    using primcalc::Window;
    return {
        {"1/x", window("-5", "5")},
        {"x*cos(x)", Window{}},
        {"cos(x^2)*x", Window{}},
        {"exp(cos(x))*sin(x)", Window{}},
        {"1/sqrt(x^2+1)", Window{}},
        {"sqrt(1-x^2)", Window{}},
        {"1/(1-cos(x)+sin(x))", window("0", "4pi")},
        {"sec(x)", window("-pi", "pi")},
        {"cos(x)^2", Window{}},
        {"1/(x*(x+1))", window("-3", "3")},
        {"x", Window{}},
        {"3*x^2-2*x+1", window("-4", "4")},
        {"1/((x-1)*(x+2))", window("-5", "5")},
    };
}

}  // namespace corpus
