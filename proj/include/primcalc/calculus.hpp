// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "primcalc/domain.hpp"
#include "primcalc/error.hpp"
#include "primcalc/expr.hpp"
#include "primcalc/tolerances.hpp"

namespace primcalc {

/// Symbolic derivative, valid on the interior of the natural domain (and off
/// the zeros of abs arguments). The result is passed through simplify_basic.
Expr differentiate(const Expr& e);

/// Central difference at h = 1e-5*max(1,|x|) with one Richardson step.
/// Throws UndefinedNear when a probe point is outside the domain.
double numeric_derivative(const Expr& e, double x);

/// Quadrature failure that still carries the best available estimate.
class ToleranceError : public Error {
public:
    ToleranceError(const std::string& what, double estimate)
        : Error(ErrorCode::ToleranceNotMet, what), estimate_(estimate) {}
    double estimate() const { return estimate_; }

private:
    double estimate_;
};

/// Adaptive Simpson over [a,b] (either order). The closed segment must lie in
/// the natural domain of e, otherwise DomainViolation; ToleranceError when the
/// subdivision budget runs out.
double quadrature(const Expr& e, const Real& a, const Real& b, const Tolerances& tol = {});

/// Zeros of e inside its natural domain within the window, snapped to exact
/// values where possible. Throws ResolutionFailure.
std::vector<Real> find_zeros(const Expr& e, const Window& window = {}, const Tolerances& tol = {});

/// Zeros of e restricted to d. d must lie inside the natural domain of e.
std::vector<Real> zeros_on(const Expr& e, const DomainSet& d, const Tolerances& tol = {});

enum class Sign { Negative, Zero, Positive, Undefined };
std::string_view to_string(Sign s);

/// breakpoints: zeros and domain boundaries inside the open window; signs has
/// one entry per gap, window edges included. Zero marks a gap on which e is
/// identically zero; Undefined a gap outside the natural domain.
struct SignChart {
    std::vector<Real> breakpoints;
    std::vector<Sign> signs;
};

SignChart sign_chart(const Expr& e, const Window& window = {}, const Tolerances& tol = {});

enum class Continuity { Continuous, C1, Unknown };
std::string_view to_string(Continuity c);

/// Unknown when d is not inside the natural domain of e; C1 when the
/// derivative is defined on all of d; Continuous otherwise.
Continuity continuity_class(const Expr& e, const DomainSet& d, const Tolerances& tol = {});

/// One-sided limit of e at p (side = +1 from the right, -1 from the left),
/// Aitken-extrapolated from three probes. nullopt if a probe is undefined.
std::optional<double> one_sided_limit(const Expr& e, double p, int side);

/// One-sided derivative of a function with value fp at p, extrapolated from
/// difference quotients. nullopt if a probe is undefined.
std::optional<double> one_sided_derivative(const Expr& e, double p, double fp, int side);

}  // namespace primcalc
