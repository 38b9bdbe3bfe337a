// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "primcalc/domain.hpp"
#include "primcalc/expr.hpp"
#include "primcalc/primitives.hpp"
#include "primcalc/report.hpp"
#include "primcalc/tolerances.hpp"

namespace primcalc {

enum class Direction { Forward, Inverse, InverseRelaxed, Definite };
std::string_view to_string(Direction d);

/// A change of variables x = g(t). For the inverse directions `inverse` is
/// the rule of g^-1 on Im_g.
struct Substitution {
    Fn g;
    Direction direction = Direction::Forward;
    std::optional<Expr> inverse;
};

struct RuleOptions {
    Tolerances tol;
    /// Record failed hypotheses as `assumed` and carry on instead of throwing.
    bool assume_unverified = false;
    int max_depth = 8;
    /// Tried after every built-in strategy, in order.
    std::vector<Substitution> hooks;
};

/// A verified family together with the steps that produced it.
struct Derivation {
    PrimitiveFamily family;
    RuleTrace trace;
};

/// Window around the sampled values of g on its domain, padded by 1 and
/// clamped to [-1e6, 1e6]. Used as the domain window of an outer function.
Window image_window(const Fn& g);

/// g^-1(D) for a single-component D, computed through the inverse rule;
/// endpoint closedness is carried over. nullopt when D has several parts or
/// the inverse is undefined at an endpoint.
std::optional<DomainSet> preimage(const DomainSet& D, const Expr& inverse, const Window& g_window);

/// Table lookup on D (D must lie in the natural domain of f_rule). The
/// returned base is defined on all of D.
std::optional<Fn> base_table(const Expr& f_rule, const DomainSet& D, const Tolerances& tol = {});

/// P(f*g') = [f*g] - P(f'*g) on D_f ∩ D_g.
Derivation by_parts(const Fn& f, const Fn& g, const RuleOptions& opts = {});

/// P((f o g)*g') with base F o g on D_g.
Derivation subst_forward(const Fn& f, const Fn& g, const RuleOptions& opts = {});

/// P(f) = {H o g^-1 + c} where H in P((f o g)*g') and g: D_g -> D_f is a
/// diffeomorphism. Throws HypothesisUnverified, InverseUnverified.
Derivation subst_inverse(const Fn& f, const Substitution& sub, const RuleOptions& opts = {});

/// As subst_inverse, but g' may vanish at the endpoints of D_g; f must be
/// continuous. Endpoint derivatives are checked one-sidedly.
Derivation subst_inverse_relaxed(const Fn& f, const Substitution& sub, const RuleOptions& opts = {});

/// Driver: table, linearity, partial fractions, Weierstrass, by parts, then
/// substitution hooks. Throws RuleNotFound carrying the partial trace.
Derivation antiderive(const Fn& f, const RuleOptions& opts = {});

struct DefiniteResult {
    double value = 0.0;
    /// Independent quadrature of the same integral.
    double cross_check = 0.0;
    RuleTrace trace;
    /// True when no primitive was found and value is the quadrature.
    bool fallback = false;
};

/// Integral of f over [a,b] (a, b in one component of D_f) by F(b) - F(a),
/// cross-checked by quadrature. Throws DomainViolation, CrossCheckMismatch.
DefiniteResult defint(const Fn& f, const Real& a, const Real& b, const RuleOptions& opts = {});

/// Integral of f(g(t))*g'(t) over [a,b], equal to the integral of f over
/// [g(a), g(b)]. Whichever side has a primitive is evaluated, the other is
/// integrated numerically as a cross-check. Throws HypothesisUnverified,
/// CrossCheckMismatch.
DefiniteResult defint_change_of_vars(const Fn& f, const Fn& g, const Real& a, const Real& b,
                                     const RuleOptions& opts = {});

}  // namespace primcalc
