// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "primcalc/domain.hpp"
#include "primcalc/expr.hpp"
#include "primcalc/report.hpp"
#include "primcalc/tolerances.hpp"

namespace primcalc::detail {

struct Rewrite {
    Expr expr;
    /// Names of the identities used; empty when nothing applied.
    std::vector<std::string> applied;
    /// Present when a rewrite was attempted: the agreement check on `on`.
    std::optional<Evidence> evidence;
};

/// Applies inverse-function cancellations (tan(arctan u) = u, ...), the
/// Pythagorean square roots (sqrt(tan^2+1) = |sec|, sqrt(1-sin^2) = |cos|),
/// sign-based removal of abs on `on`, and collection of equal factors into
/// powers. The result is kept only if it is defined and numerically equal to
/// e at every sample of `on` where e is defined; otherwise e is returned.
Rewrite rewrite_on(const Expr& e, const DomainSet& on, const Tolerances& tol);

/// Equal factors of a product merged into powers: cos(x)*cos(x) -> cos(x)^2,
/// sec(x)^2/sec(x) -> sec(x). May enlarge the natural domain.
Expr collect_powers(const Expr& e);

/// collect_powers applied at every product node, then simplify_basic.
Expr tidy(const Expr& e);

/// +1 when e >= 0 at every sample of `on`, -1 when e <= 0, nullopt otherwise.
std::optional<int> sign_on(const Expr& e, const DomainSet& on);

/// Do a and b agree (within 1e-9 relative) wherever a is defined on `on`?
bool agree_on(const Expr& a, const Expr& b, const DomainSet& on, std::string* detail = nullptr);

/// Interior samples of each component plus closed endpoints.
std::vector<double> sample_set(const DomainSet& on, std::size_t per_component);

}  // namespace primcalc::detail
