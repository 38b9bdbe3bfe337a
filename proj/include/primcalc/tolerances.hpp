// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace primcalc {

/// Numeric knobs shared by domain inference, the calculus oracles and the
/// verifiers. Defaults are the documented ones; the CLI can override some.
struct Tolerances {
    /// The window is scanned at step window_length / scan_divisions.
    std::size_t scan_divisions = 4096;
    double bisection = 1e-12;
    double snap = 1e-9;
    /// |e| below this at a critical point counts as a touching zero.
    double tangential = 1e-10;
    /// Relative tolerance for derivative agreement (64-point check).
    double derivative = 1e-8;
    /// One-sided derivative agreement at endpoints and plugs.
    double one_sided = 1e-5;
    double quadrature = 1e-10;
    std::size_t max_subdivisions = 10000;
    /// Sample points closer than this to an endpoint or plug are skipped.
    double edge = 1e-7;
    /// Agreement of the two one-sided limits at a removable point.
    double limit = 1e-7;
    double constant_recovery = 1e-8;
    /// FTC2 value against quadrature.
    double cross_check = 1e-7;
};

}  // namespace primcalc
