// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "primcalc/calculus.hpp"
#include "primcalc/domain.hpp"
#include "primcalc/expr.hpp"
#include "primcalc/report.hpp"
#include "primcalc/tolerances.hpp"

namespace primcalc {

/// A removable point filled in by hand: the function takes `value` at
/// `point` even though the rule is undefined there.
struct Plug {
    Real point;
    Real value;
};

/// A real function as a triple: domain, codomain (always the reals) and a
/// rule. The rule is either one Expr for the whole domain or one Expr per
/// connected component; plugs override the rule at finitely many points.
class Fn {
public:
    /// Checked: the domain must be standard and every point of it must be in
    /// the natural domain of its rule or be a plug. Throws InvalidArgument or
    /// DomainViolation.
    static Fn make(Expr rule, DomainSet domain, std::vector<Plug> plugs = {}, const Tolerances& tol = {});
    /// Rule restricted to its whole natural domain in the window.
    static Fn natural(Expr rule, const Window& window = {}, const Tolerances& tol = {});
    /// One rule per component of `domain`, checked like make.
    static Fn piecewise(std::vector<Expr> rules, DomainSet domain, std::vector<Plug> plugs = {},
                        const Tolerances& tol = {});
    /// No checks at all; for modelling externally supplied objects.
    static Fn unchecked(std::vector<Expr> rules, DomainSet domain, std::vector<Plug> plugs = {});

    const DomainSet& domain() const { return domain_; }
    const Window& window() const { return domain_.window(); }
    const std::vector<Plug>& plugs() const { return plugs_; }
    const std::vector<Expr>& rules() const { return rules_; }
    bool is_uniform() const { return rules_.size() == 1; }
    /// Rule used on component i.
    const Expr& rule(std::size_t component = 0) const;
    /// Rule used at x (x must be in the domain).
    const Expr& rule_at(double x) const;
    const Plug* plug_at(double x) const;

    /// Value at x; nullopt outside the domain.
    std::optional<double> operator()(double x) const;

    /// The rule text, or a case form for piecewise rules and plugs.
    std::string to_string() const;

private:
    Fn(std::vector<Expr> rules, DomainSet domain, std::vector<Plug> plugs)
        : rules_(std::move(rules)), domain_(std::move(domain)), plugs_(std::move(plugs)) {}

    std::vector<Expr> rules_;
    DomainSet domain_;
    std::vector<Plug> plugs_;
};

/// P(f) represented by one verified primitive F plus one free constant per
/// connected component of the domain.
class PrimitiveFamily {
public:
    const Fn& base() const { return base_; }
    const Fn& target() const { return target_; }
    std::vector<Interval> components() const { return primcalc::components(base_.domain()); }
    std::size_t arity() const { return base_.domain().parts().size(); }

    /// Case form: "x*sin(x) + c" for one component, otherwise one clause per
    /// component ("... + c1 if x in ]-5,0[; ...") with plug clauses.
    std::string to_string() const;

private:
    friend PrimitiveFamily family_from_base(const Fn& F, const Fn& f, const Tolerances& tol);
    PrimitiveFamily(Fn base, Fn target) : base_(std::move(base)), target_(std::move(target)) {}

    Fn base_;
    Fn target_;
};

/// Is F' = f, including D_F = D_f? Symbolic derivative first, 64-point numeric
/// agreement per component otherwise, then one-sided checks at plugs and at
/// closed endpoints where the symbolic derivative is undefined.
CheckReport is_primitive(const Fn& F, const Fn& f, const Tolerances& tol = {});

/// f ~ g: equal domains and equal derivatives.
CheckReport equivalent(const Fn& f, const Fn& g, const Tolerances& tol = {});

/// Throws NotAPrimitive carrying the failing report.
PrimitiveFamily family_from_base(const Fn& F, const Fn& f, const Tolerances& tol = {});

/// base + constants[i] on component i. Throws ArityMismatch.
Fn member(const PrimitiveFamily& fam, const std::vector<Real>& constants);

struct Containment {
    CheckReport report;
    /// Recovered constant per component (mean of phi - base), on pass.
    std::vector<Real> constants;
};

Containment contains(const PrimitiveFamily& fam, const Fn& phi, const Tolerances& tol = {});

/// Families of f + g, f - g and alpha*f on the intersected domain. Throw
/// EmptyDomain (no common interval) and ZeroScale.
PrimitiveFamily class_add(const PrimitiveFamily& a, const PrimitiveFamily& b, const Tolerances& tol = {});
PrimitiveFamily class_sub(const PrimitiveFamily& a, const PrimitiveFamily& b, const Tolerances& tol = {});
PrimitiveFamily class_scale(const Real& alpha, const PrimitiveFamily& a, const Tolerances& tol = {});

/// Existence of a primitive: standard domain and a continuous rule on every
/// component (plugs must match the one-sided limits).
CheckReport has_primitive(const Fn& f, const Tolerances& tol = {});

/// Pointwise combination of two functions on the intersection of their
/// domains; rules are simplified, plugs are re-evaluated.
Fn combine(const Fn& a, const Fn& b, Op op, const Tolerances& tol = {});
/// alpha * f.
Fn scale(const Real& alpha, const Fn& f);

}  // namespace primcalc
