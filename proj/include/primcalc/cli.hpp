// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "primcalc/error.hpp"
#include "primcalc/report.hpp"
#include "primcalc/tolerances.hpp"

namespace primcalc {

/// One entry of the built-in catalog of failure modes of the bare integral
/// sign. `report` is the verdict that demonstrates the failure mode;
/// `as_expected` is false when that verdict flipped.
struct CatalogItem {
    int id = 0;
    std::string title;
    std::string expectation;
    bool as_expected = false;
    CheckReport report;
    /// Recovered constants, for the containment item.
    std::vector<Real> constants;
    std::string detail;
};

/// Runs every catalog item and returns them in order.
std::vector<CatalogItem> run_catalog(const Tolerances& tol = {});

/// run_catalog, but throws CatalogBroken when any expected verdict flipped.
std::vector<CatalogItem> counterexamples(const Tolerances& tol = {});

/// Process exit status for a library error: 1 for verdict-like failures, 2
/// for usage and parse errors, 3 for everything the engine could not decide.
int exit_code(ErrorCode code);

/// Command-line entry point. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace primcalc
