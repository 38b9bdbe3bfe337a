// SPDX-License-Identifier: Apache-2.0
#include "primcalc/rules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "identities.hpp"
#include "primcalc/calculus.hpp"
#include "primcalc/error.hpp"

namespace primcalc {

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::Forward: return "forward";
        case Direction::Inverse: return "inverse";
        case Direction::InverseRelaxed: return "inverse_relaxed";
        case Direction::Definite: return "definite";
    }
    return "?";
}

namespace {

using detail::agree_on;
using detail::rewrite_on;
using detail::sample_set;

const Expr& X() {
    static const Expr x = var_x();
    return x;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Pattern helpers

std::optional<Rational> rational_of(const Expr& e) {
    if (contains_var(e)) return std::nullopt;
    auto v = constant_value(e);
    if (!v || v->kind() != Real::Kind::Rational) return std::nullopt;
    return v->coefficient();
}

/// p*x + q
struct Linear {
    Rational p;
    Rational q;
};

std::optional<Linear> linear_of(const Expr& e) {
    if (auto r = rational_of(e)) return Linear{Rational(0), *r};
    switch (e.op()) {
        case Op::Var: return Linear{Rational(1), Rational(0)};
        case Op::Neg: {
            auto a = linear_of(e.child());
            if (!a) return std::nullopt;
            return Linear{-a->p, -a->q};
        }
        case Op::Add:
        case Op::Sub: {
            auto a = linear_of(e.lhs());
            auto b = linear_of(e.rhs());
            if (!a || !b) return std::nullopt;
            if (e.op() == Op::Sub) return Linear{a->p - b->p, a->q - b->q};
            return Linear{a->p + b->p, a->q + b->q};
        }
        case Op::Mul: {
            if (auto c = rational_of(e.lhs())) {
                auto b = linear_of(e.rhs());
                if (b) return Linear{*c * b->p, *c * b->q};
            }
            if (auto c = rational_of(e.rhs())) {
                auto a = linear_of(e.lhs());
                if (a) return Linear{*c * a->p, *c * a->q};
            }
            return std::nullopt;
        }
        case Op::Div: {
            auto c = rational_of(e.rhs());
            if (!c || c->is_zero()) return std::nullopt;
            auto a = linear_of(e.lhs());
            if (!a) return std::nullopt;
            return Linear{a->p / *c, a->q / *c};
        }
        default: return std::nullopt;
    }
}

/// x + c, printed as "x-1" rather than "x+-1".
Expr shifted_x(const Rational& c) {
    if (c.is_zero()) return X();
    return c.is_negative() ? X() - num(-c) : X() + num(c);
}

Expr scaled(const Rational& c, const Expr& e) {
    if (c == Rational(1)) return e;
    if (c == Rational(-1)) return simplify_basic(-e);
    return simplify_basic(num(c) * e);
}

bool is_x_pow(const Expr& e, std::int64_t n) {
    return e.op() == Op::Pow && e.child().is_var() && e.exponent() == Rational(n);
}

bool is_fn_of_x(const Expr& e, Op op) { return e.op() == op && e.child().is_var(); }

/// 1 + x^2 in either order.
bool is_one_plus_x2(const Expr& e) {
    if (e.op() != Op::Add) return false;
    return (e.lhs().is_one() && is_x_pow(e.rhs(), 2)) || (e.rhs().is_one() && is_x_pow(e.lhs(), 2));
}

bool is_one_minus_x2(const Expr& e) {
    return e.op() == Op::Sub && e.lhs().is_one() && is_x_pow(e.rhs(), 2);
}

struct TableHit {
    Expr base;
    std::string entry;
};

std::optional<TableHit> table_rule(const Expr& f) {
    if (!contains_var(f)) return TableHit{simplify_basic(f * X()), "c -> c*x"};
    if (f.is_var()) return TableHit{parse_expr("x^2/2"), "x -> x^2/2"};
    if (f.op() == Op::Pow && f.child().is_var()) {
        const Rational& n = f.exponent();
        if (n == Rational(-1)) return TableHit{ln(abs(X())), "x^-1 -> ln|x|"};
        Rational m = n + Rational(1);
        return TableHit{simplify_basic(pow(X(), m) / num(m)), "x^n -> x^(n+1)/(n+1)"};
    }
    if (is_fn_of_x(f, Op::Exp)) return TableHit{exp(X()), "exp -> exp"};
    if (is_fn_of_x(f, Op::Sin)) return TableHit{-cos(X()), "sin -> -cos"};
    if (is_fn_of_x(f, Op::Cos)) return TableHit{sin(X()), "cos -> sin"};
    if (is_fn_of_x(f, Op::Sec)) return TableHit{parse_expr("ln(abs(tan(x)+sec(x)))"), "sec -> ln|tan+sec|"};
    if (f.op() == Op::Pow && f.exponent() == Rational(2)) {
        if (is_fn_of_x(f.child(), Op::Sec)) return TableHit{tan(X()), "sec^2 -> tan"};
        if (is_fn_of_x(f.child(), Op::Cos))
            return TableHit{parse_expr("x/2 + sin(x)*cos(x)/2"), "cos^2 -> x/2 + sin*cos/2"};
        if (is_fn_of_x(f.child(), Op::Sin))
            return TableHit{parse_expr("x/2 - sin(x)*cos(x)/2"), "sin^2 -> x/2 - sin*cos/2"};
    }
    if (f.op() == Op::Div && f.lhs().is_one()) {
        const Expr& d = f.rhs();
        if (is_one_plus_x2(d)) return TableHit{arctan(X()), "1/(1+x^2) -> arctan"};
        if (d.op() == Op::Sqrt && is_one_minus_x2(d.child()))
            return TableHit{arcsin(X()), "1/sqrt(1-x^2) -> arcsin"};
        if (d.op() == Op::Pow && d.child().is_var() && d.exponent() != Rational(1)) {
            Rational m = Rational(1) - d.exponent();
            return TableHit{simplify_basic(pow(X(), m) / num(m)), "x^n -> x^(n+1)/(n+1)"};
        }
        if (auto l = linear_of(d); l && !l->p.is_zero()) {
            Expr inner = l->p == Rational(1) ? shifted_x(l->q) : d;
            return TableHit{scaled(Rational(1) / l->p, ln(abs(inner))), "1/(p*x+q) -> ln|p*x+q|/p"};
        }
        // 1/(x*(x+c)) = (1/x - 1/(x+c))/c
        if (d.op() == Op::Mul) {
            for (int side = 0; side < 2; ++side) {
                const Expr& a = side == 0 ? d.lhs() : d.rhs();
                const Expr& b = side == 0 ? d.rhs() : d.lhs();
                auto lb = linear_of(b);
                if (!a.is_var() || !lb || lb->p != Rational(1) || lb->q.is_zero()) continue;
                Expr diff = ln(abs(X())) - ln(abs(shifted_x(lb->q)));
                return TableHit{lb->q == Rational(1) ? diff : simplify_basic(diff / num(lb->q)),
                                "1/(x*(x+c)) -> (ln|x| - ln|x+c|)/c"};
            }
        }
    }
    return std::nullopt;
}

/// alpha + beta*cos(x) + gamma*sin(x)
struct TrigLinear {
    Rational alpha{0};
    Rational beta{0};
    Rational gamma{0};
};

bool trig_terms(const Expr& e, const Rational& s, TrigLinear& out) {
    if (auto r = rational_of(e)) {
        out.alpha = out.alpha + s * *r;
        return true;
    }
    switch (e.op()) {
        case Op::Add: return trig_terms(e.lhs(), s, out) && trig_terms(e.rhs(), s, out);
        case Op::Sub: return trig_terms(e.lhs(), s, out) && trig_terms(e.rhs(), -s, out);
        case Op::Neg: return trig_terms(e.child(), -s, out);
        case Op::Cos:
            if (!e.child().is_var()) return false;
            out.beta = out.beta + s;
            return true;
        case Op::Sin:
            if (!e.child().is_var()) return false;
            out.gamma = out.gamma + s;
            return true;
        case Op::Mul:
            if (auto c = rational_of(e.lhs())) return trig_terms(e.rhs(), s * *c, out);
            if (auto c = rational_of(e.rhs())) return trig_terms(e.lhs(), s * *c, out);
            return false;
        default: return false;
    }
}

Expr replace_subtree(const Expr& e, const Expr& pattern, const Expr& with) {
    if (e == pattern) return with;
    switch (e.op()) {
        case Op::Const:
        case Op::Var: return e;
        case Op::Pow: return pow(replace_subtree(e.child(), pattern, with), e.exponent());
        default:
            if (e.arity() == 1) return Expr::make_unary(e.op(), replace_subtree(e.child(), pattern, with));
            return Expr::make_binary(e.op(), replace_subtree(e.lhs(), pattern, with),
                                     replace_subtree(e.rhs(), pattern, with));
    }
}

void subexpressions(const Expr& e, std::vector<Expr>& out) {
    out.push_back(e);
    if (e.is_const() || e.is_var()) return;
    for (std::size_t i = 0; i < e.arity(); ++i) subexpressions(e.child(i), out);
}

void factors_of(const Expr& e, std::vector<Expr>& out) {
    if (e.op() == Op::Mul) {
        factors_of(e.lhs(), out);
        factors_of(e.rhs(), out);
    } else if (e.op() == Op::Div) {
        factors_of(e.lhs(), out);
        out.push_back(num(1) / e.rhs());
    } else if (e.op() == Op::Neg) {
        factors_of(e.child(), out);
    } else {
        out.push_back(e);
    }
}

bool has_subexpression(const Expr& e, const std::function<bool(const Expr&)>& pred) {
    std::vector<Expr> subs;
    subexpressions(e, subs);
    return std::any_of(subs.begin(), subs.end(), pred);
}

Window image_window(const Expr& g, const DomainSet& on) {
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (double x : sample_set(on, 64)) {
        auto v = eval_at(g, x);
        if (!v || !std::isfinite(*v)) continue;
        lo = any ? std::min(lo, *v) : *v;
        hi = any ? std::max(hi, *v) : *v;
        any = true;
    }
    constexpr double kClamp = 1e6;
    lo = std::max(std::floor(lo) - 1.0, -kClamp);
    hi = std::min(std::ceil(hi) + 1.0, kClamp);
    return make_window(Real::integer(static_cast<std::int64_t>(lo)), Real::integer(static_cast<std::int64_t>(hi)));
}

DomainSet single(const Interval& c, const Window& w) { return DomainSet::from_parts({c}, w); }

EvidenceLevel level_of(const CheckReport& rep) {
    for (const auto& e : rep.evidence)
        if (e.level != EvidenceLevel::Symbolic) return EvidenceLevel::Numeric;
    return EvidenceLevel::Symbolic;
}

// ---------------------------------------------------------------------------

struct Candidate {
    std::string rule;
    std::string theorem;
    std::vector<Evidence> evidence;
    Expr base;
};

class Engine {
public:
    explicit Engine(const RuleOptions& opts) : opt_(opts) {}

    RuleTrace trace;

    Fn solve(const Expr& f, const DomainSet& D, int depth);
    Fn solve_fn(const Fn& f, int depth);

    Fn by_parts(const Fn& f, const Fn& g, int depth);
    Fn forward(const Fn& f, const Fn& g, int depth);
    Fn inverse(const Fn& f, const Substitution& sub, bool relaxed, int depth);

    /// Base on D from a rule valid on D up to isolated removable points.
    /// Gap evidence goes to `gaps`.
    Fn finish(const Expr& R, const DomainSet& D, const std::function<bool(double)>& f_defined,
              std::vector<Evidence>& gaps);

    /// Verifies F against f and records the step. Returns the family.
    PrimitiveFamily record(const Fn& F, const Fn& f, std::string rule, std::string theorem,
                           std::vector<Evidence> evidence, const std::vector<Evidence>& gaps);

    void stitch(const PrimitiveFamily& fam);

    const Tolerances& tol() const { return opt_.tol; }

private:
    using Strategy = std::optional<Candidate> (Engine::*)(const Expr&, const Expr&, const DomainSet&, int);

    std::optional<Candidate> s_table(const Expr& f, const Expr& fs, const DomainSet& D, int depth);
    std::optional<Candidate> s_linearity(const Expr& f, const Expr& fs, const DomainSet& D, int depth);
    std::optional<Candidate> s_partial_fractions(const Expr& f, const Expr& fs, const DomainSet& D, int depth);
    std::optional<Candidate> s_weierstrass(const Expr& f, const Expr& fs, const DomainSet& D, int depth);
    std::optional<Candidate> s_by_parts(const Expr& f, const Expr& fs, const DomainSet& D, int depth);
    std::optional<Candidate> s_hooks(const Expr& f, const Expr& fs, const DomainSet& D, int depth);

    std::optional<Candidate> derivative_divides(const Expr& fs, const DomainSet& D, int depth);

    /// Records a hypothesis; throws (code, report) when it fails unless the
    /// caller opted into assumptions.
    void require(std::vector<Evidence>& ev, Evidence e, std::optional<Real> witness = std::nullopt,
                 ErrorCode code = ErrorCode::HypothesisUnverified,
                 Reason reason = Reason::HypothesisUnverified);

    const RuleOptions& opt_;
};

void Engine::require(std::vector<Evidence>& ev, Evidence e, std::optional<Real> witness, ErrorCode code,
                     Reason reason) {
    if (e.holds) {
        ev.push_back(std::move(e));
        return;
    }
    if (opt_.assume_unverified) {
        e.level = EvidenceLevel::Assumed;
        e.detail = "check failed (" + e.detail + "), assumed on request";
        e.holds = true;
        ev.push_back(std::move(e));
        return;
    }
    CheckReport rep;
    for (const auto& prior : ev) rep.add(prior);
    rep.add(e);
    rep.fail(reason, e.hypothesis + " not verified: " + e.detail);
    rep.witness = witness;
    throw Error(code, rep.message, rep);
}

Fn Engine::finish(const Expr& R, const DomainSet& D, const std::function<bool(double)>& f_defined,
                  std::vector<Evidence>& gaps) {
    DomainSet N = natural_domain(R, D.window(), tol());
    std::vector<Real> points;
    std::vector<Plug> plugs;
    for (int guard = 0; guard < 64; ++guard) {
        auto w = subset_witness(D, N, points);
        if (!w) break;
        Real p = w->is_exact() ? *w : snap(w->value());
        double pv = p.value();
        double probe = 1e-6 * (1.0 + std::abs(pv));
        bool isolated = eval_at(R, pv - probe) && eval_at(R, pv + probe);
        if (!isolated)
            throw Error(ErrorCode::DomainViolation,
                        format_expr(R) + " is undefined near " + p.to_string() + " inside " + D.to_string());
        std::string hyp = "removable gap at " + p.to_string();
        auto l = one_sided_limit(R, pv, -1);
        auto r = one_sided_limit(R, pv, 1);
        bool defined = f_defined(pv);
        bool agree = l && r && std::abs(*l - *r) <= tol().limit;
        if (!defined || !agree) {
            std::string why = !defined ? "integrand undefined there"
                                       : (l && r ? "one-sided limits " + fmt(*l) + " and " + fmt(*r) + " differ"
                                                 : "a one-sided limit does not exist");
            throw Error(ErrorCode::DomainViolation, hyp + ": " + why);
        }
        Real value = snap(0.5 * (*l + *r), SnapOptions{tol().limit, 12, 64});
        gaps.push_back({hyp, EvidenceLevel::Numeric, true,
                        "left limit " + fmt(*l) + ", right limit " + fmt(*r) + ", plug value " + value.to_string()});
        plugs.push_back({p, value});
        points.push_back(p);
    }
    return Fn::make(R, D, plugs, tol());
}

PrimitiveFamily Engine::record(const Fn& F, const Fn& f, std::string rule, std::string theorem,
                               std::vector<Evidence> evidence, const std::vector<Evidence>& gaps) {
    CheckReport rep = is_primitive(F, f, tol());
    if (!rep.passed()) throw Error(ErrorCode::NotAPrimitive, rule + ": " + rep.message, rep);
    PrimitiveFamily fam = family_from_base(F, f, tol());
    std::string detail = std::to_string(rep.evidence.size()) + " checks";
    for (const auto& e : rep.evidence)
        if (e.hypothesis.rfind("one-sided", 0) == 0) evidence.push_back(e);
    evidence.push_back({"F' = f on D_f", level_of(rep), true, detail});
    trace.steps.push_back({std::move(rule), std::move(theorem), std::move(evidence), fam.to_string()});
    if (!gaps.empty()) trace.steps.push_back({"gap_fill", "GAP_FILL", gaps, fam.to_string()});
    return fam;
}

void Engine::stitch(const PrimitiveFamily& fam) {
    if (fam.arity() < 2) return;
    trace.steps.push_back({"component_stitch",
                           "PRIM3",
                           {{"one free constant per component of D_f", EvidenceLevel::Symbolic, true,
                             std::to_string(fam.arity()) + " components: " + fam.target().domain().to_string()}},
                           fam.to_string()});
}

Fn Engine::solve(const Expr& f, const DomainSet& D, int depth) {
    if (depth > opt_.max_depth)
        throw Error(ErrorCode::RuleNotFound, "recursion depth cap reached at " + format_expr(f), trace);
    Fn target = Fn::make(f, D, {}, tol());
    Expr fs = simplify_basic(f);
    auto defined = [&target](double x) { return target(x).has_value(); };

    static const Strategy kOrder[] = {&Engine::s_table,      &Engine::s_linearity, &Engine::s_partial_fractions,
                                      &Engine::s_weierstrass, &Engine::s_by_parts,  &Engine::s_hooks};
    for (Strategy s : kOrder) {
        std::size_t mark = trace.steps.size();
        try {
            auto cand = (this->*s)(f, fs, D, depth);
            if (!cand) continue;
            std::vector<Evidence> gaps;
            Fn F = finish(cand->base, D, defined, gaps);
            // An empty rule name means the delegate already verified and
            // recorded its step.
            if (!cand->rule.empty()) record(F, target, cand->rule, cand->theorem, cand->evidence, gaps);
            return F;
        } catch (const Error&) {
            trace.steps.resize(mark);
        }
    }
    throw Error(ErrorCode::RuleNotFound, "no rule applies to " + format_expr(f) + " on " + D.to_string(), trace);
}

Fn Engine::solve_fn(const Fn& f, int depth) {
    std::vector<Real> plug_points;
    for (const auto& p : f.plugs()) plug_points.push_back(p.point);
    auto defined = [&f](double x) { return f(x).has_value(); };
    if (f.is_uniform()) {
        if (plug_points.empty()) return solve(f.rule(), f.domain(), depth);
        Fn inner = solve(f.rule(), remove_points(f.domain(), plug_points), depth);
        std::vector<Evidence> gaps;
        Fn F = finish(inner.rule(), f.domain(), defined, gaps);
        if (!gaps.empty()) {
            PrimitiveFamily fam = family_from_base(F, f, tol());
            trace.steps.push_back({"gap_fill", "GAP_FILL", gaps, fam.to_string()});
        }
        return F;
    }
    std::vector<Expr> rules;
    std::vector<Plug> plugs;
    const auto& parts = f.domain().parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        DomainSet Di = single(parts[i], f.window());
        Fn Fi = solve(f.rule(i), remove_points(Di, plug_points), depth);
        std::vector<Evidence> gaps;
        Fn Gi = finish(Fi.rule(), Di, defined, gaps);
        rules.push_back(Gi.rule());
        plugs.insert(plugs.end(), Gi.plugs().begin(), Gi.plugs().end());
        if (!gaps.empty()) trace.steps.push_back({"gap_fill", "GAP_FILL", gaps, Gi.to_string()});
    }
    return Fn::piecewise(rules, f.domain(), plugs, tol());
}

// ---------------------------------------------------------------------------
// Strategies

std::optional<Candidate> Engine::s_table(const Expr&, const Expr& fs, const DomainSet&, int) {
    auto hit = table_rule(fs);
    if (!hit) return std::nullopt;
    return Candidate{"base_table",
                     "TABLE",
                     {{"f matches table entry", EvidenceLevel::Symbolic, true, hit->entry}},
                     hit->base};
}

std::optional<Candidate> Engine::s_linearity(const Expr&, const Expr& fs, const DomainSet& D, int depth) {
    const char* sum_hyp = "P(f) + P(g) is contained in P(f+g) on a common domain";
    const char* scale_hyp = "c*P(f) is contained in P(c*f), c constant";
    switch (fs.op()) {
        case Op::Add:
        case Op::Sub: {
            Fn a = solve(fs.lhs(), D, depth + 1);
            Fn b = solve(fs.rhs(), D, depth + 1);
            Expr R = fs.op() == Op::Add ? a.rule() + b.rule() : a.rule() - b.rule();
            return Candidate{"linearity", "LINEARITY", {{sum_hyp, EvidenceLevel::Symbolic, true, format_expr(fs)}},
                             simplify_basic(R)};
        }
        case Op::Neg: {
            Fn a = solve(fs.child(), D, depth + 1);
            return Candidate{"linearity", "LINEARITY", {{scale_hyp, EvidenceLevel::Symbolic, true, "c = -1"}},
                             simplify_basic(-a.rule())};
        }
        case Op::Mul:
        case Op::Div: {
            std::optional<Expr> c;
            std::optional<Expr> u;
            if (fs.op() == Op::Mul && !contains_var(fs.lhs())) {
                c = fs.lhs();
                u = fs.rhs();
            } else if (fs.op() == Op::Mul && !contains_var(fs.rhs())) {
                c = fs.rhs();
                u = fs.lhs();
            } else if (fs.op() == Op::Div && !contains_var(fs.rhs())) {
                c = num(1) / fs.rhs();
                u = fs.lhs();
            } else if (fs.op() == Op::Div && !contains_var(fs.lhs()) && !fs.lhs().is_one()) {
                c = fs.lhs();
                u = num(1) / fs.rhs();
            }
            if (!c) return std::nullopt;
            Fn a = solve(*u, D, depth + 1);
            return Candidate{"linearity",
                             "LINEARITY",
                             {{scale_hyp, EvidenceLevel::Symbolic, true, "c = " + format_expr(*c)}},
                             simplify_basic(*c * a.rule())};
        }
        default: return std::nullopt;
    }
}

std::optional<Candidate> Engine::s_partial_fractions(const Expr&, const Expr& fs, const DomainSet&, int) {
    if (fs.op() != Op::Div || fs.rhs().op() != Op::Mul) return std::nullopt;
    auto c = rational_of(fs.lhs());
    auto l1 = linear_of(fs.rhs().lhs());
    auto l2 = linear_of(fs.rhs().rhs());
    if (!c || !l1 || !l2 || l1->p.is_zero() || l2->p.is_zero()) return std::nullopt;
    Rational r1 = -l1->q / l1->p;
    Rational r2 = -l2->q / l2->p;
    if (r1 == r2) return std::nullopt;
    // c/((p1 x + q1)(p2 x + q2)) = k*(1/(x-r1) - 1/(x-r2)), k = c/(p1 p2 (r1-r2))
    Rational k = *c / (l1->p * l2->p * (r1 - r2));
    Expr a = shifted_x(-r1);
    Expr b = shifted_x(-r2);
    Expr split = scaled(k, num(1) / a - num(1) / b);
    Expr R = scaled(k, ln(abs(a)) - ln(abs(b)));
    return Candidate{"partial_fractions",
                     "PARTIAL_FRACTIONS",
                     {{"f = " + format_expr(split), EvidenceLevel::Symbolic, true, "distinct linear factors"}},
                     R};
}

std::optional<Candidate> Engine::s_weierstrass(const Expr& f, const Expr& fs, const DomainSet& D, int depth) {
    if (fs.op() != Op::Div) return std::nullopt;
    auto c0 = rational_of(fs.lhs());
    TrigLinear t;
    if (!c0 || !trig_terms(fs.rhs(), Rational(1), t)) return std::nullopt;
    // With t = tan(x/2) the denominator becomes ((A t^2 + B t + C)/(1+t^2)),
    // A = alpha-beta, B = 2 gamma, C = alpha+beta. Only C = 0 is handled.
    Rational A = t.alpha - t.beta;
    Rational B = Rational(2) * t.gamma;
    Rational C = t.alpha + t.beta;
    if (!C.is_zero() || A.is_zero() || B.is_zero()) return std::nullopt;

    // Off odd multiples of pi, where tan(x/2) is defined.
    const Window& w = D.window();
    std::vector<Real> odd;
    double lo = w.lo.value();
    double hi = w.hi.value();
    for (auto k = static_cast<std::int64_t>(std::floor((lo / M_PI - 1.0) / 2.0));
         (2.0 * static_cast<double>(k) + 1.0) * M_PI < hi; ++k) {
        double p = (2.0 * static_cast<double>(k) + 1.0) * M_PI;
        if (p > lo) odd.push_back(Real::pi_multiple(Rational(2 * k + 1)));
    }
    DomainSet W = remove_points(D, odd);

    Rational c = B / A;
    Rational k = *c0 * Rational(2) / A;
    Expr h = k == Rational(1) ? num(1) / (X() * shifted_x(c)) : num(k) / (X() * shifted_x(c));
    Expr g_rule = tan(X() / num(2));
    Fn g = Fn::make(g_rule, W, {}, tol());

    std::vector<Evidence> ev;
    std::string detail;
    Expr pulled = simplify_basic(substitute(h, g_rule) * differentiate(g_rule));
    bool same = agree_on(f, pulled, W, &detail);
    require(ev, {"f = (h o g)*g' with h = " + format_expr(h) + ", g = tan(x/2) on " + W.to_string(),
                 EvidenceLevel::Numeric, same, detail});

    Fn base = forward(Fn::natural(h, image_window(g_rule, W), tol()), g, depth + 1);

    // ln|t| - ln|t+c| = ln|t/(t+c)| with t = sin(x)/(1+cos(x)).
    Expr s = sin(X());
    Expr one_cos = num(1) + cos(X());
    Expr denom = c == Rational(1) ? one_cos + s : num(c) * one_cos + s;
    Expr R = scaled(*c0 * Rational(2) / B, ln(abs(s / denom)));
    bool rewrite_ok = agree_on(base.rule(), R, W, &detail);
    require(ev, {"tan(x/2) = sin(x)/(1+cos(x)) rewrite of " + format_expr(base.rule()), EvidenceLevel::Numeric,
                 rewrite_ok, detail});
    return Candidate{"weierstrass", "WEIERSTRASS", ev, R};
}

std::optional<Candidate> Engine::s_by_parts(const Expr&, const Expr& fs, const DomainSet& D, int depth) {
    if (fs.op() != Op::Mul) return std::nullopt;
    for (int side = 0; side < 2; ++side) {
        const Expr& u = side == 0 ? fs.lhs() : fs.rhs();
        const Expr& v = side == 0 ? fs.rhs() : fs.lhs();
        if (!is_polynomial(u) || !contains_var(u) || !contains_var(v) || is_polynomial(v)) continue;
        Fn G = solve(v, D, depth + 1);
        Fn base = by_parts(Fn::make(u, D, {}, tol()), Fn::make(G.rule(), D, {}, tol()), depth + 1);
        // Already verified and recorded by by_parts.
        return Candidate{"", "", {}, base.rule()};
    }
    return std::nullopt;
}

std::optional<Candidate> Engine::derivative_divides(const Expr& fs, const DomainSet& D, int depth) {
    std::vector<Expr> factors;
    factors_of(fs, factors);
    for (const Expr& fac : factors) {
        std::vector<Expr> subs;
        subexpressions(fac, subs);
        for (const Expr& u : subs) {
            if (u == fac || u.is_var() || !contains_var(u)) continue;
            Expr phi = replace_subtree(fac, u, X());
            if (contains_var(replace_subtree(fac, u, num(1)))) continue;
            Expr du = differentiate(u);
            // f / ((phi o u) * u') must be a rational constant on D.
            std::optional<double> ratio;
            bool constant = true;
            int seen = 0;
            for (double x : sample_set(D, 16)) {
                auto fv = eval_at(fs, x);
                auto pv = eval_at(fac, x);
                auto dv = eval_at(du, x);
                if (!fv || !pv || !dv || std::abs(*pv * *dv) < 1e-12) continue;
                double r = *fv / (*pv * *dv);
                if (!ratio) ratio = r;
                if (std::abs(r - *ratio) > 1e-9 * (1.0 + std::abs(*ratio))) {
                    constant = false;
                    break;
                }
                ++seen;
            }
            if (!constant || !ratio || seen < 4) continue;
            Real c = snap(*ratio);
            if (c.kind() != Real::Kind::Rational) continue;
            try {
                Fn g = Fn::make(u, D, {}, tol());
                Fn base = forward(Fn::natural(phi, image_window(u, D), tol()), g, depth + 1);
                if (c.coefficient() == Rational(1)) return Candidate{"", "", {}, base.rule()};
                return Candidate{"linearity",
                                 "LINEARITY",
                                 {{"f = c*(phi o u)*u' with c = " + c.to_string() + ", u = " + format_expr(u),
                                   EvidenceLevel::Numeric, true, std::to_string(seen) + " samples"}},
                                 scaled(c.coefficient(), base.rule())};
            } catch (const Error&) {
                continue;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<DomainSet> preimage(const DomainSet& D, const Expr& inverse, const Window& gw) {
    if (D.parts().size() != 1) return std::nullopt;
    const Interval& c = D.parts()[0];
    auto a = eval_at(inverse, c.lo.value());
    auto b = eval_at(inverse, c.hi.value());
    if (!a || !b) return std::nullopt;
    Real ra = snap(std::min(*a, *b));
    Real rb = snap(std::max(*a, *b));
    bool lo_closed = *a <= *b ? c.lo_closed : c.hi_closed;
    bool hi_closed = *a <= *b ? c.hi_closed : c.lo_closed;
    return DomainSet::from_parts({Interval::make(ra, rb, lo_closed, hi_closed)}, gw);
}

Window image_window(const Fn& g) { return image_window(g.rule(), g.domain()); }

namespace {

std::optional<Candidate> Engine::s_hooks(const Expr& f, const Expr& fs, const DomainSet& D, int depth) {
    if (auto c = derivative_divides(fs, D, depth)) return c;

    const Window gw = make_window(Real::pi_multiple(Rational(-1)), Real::pi_multiple(Rational(1)));
    Fn target = Fn::make(f, D, {}, tol());
    bool full = D.parts().size() == 1 && !D.parts()[0].lo_closed && !D.parts()[0].hi_closed &&
                equal(D.parts()[0].lo, D.window().lo) && equal(D.parts()[0].hi, D.window().hi);

    std::vector<Substitution> subs;
    auto has = [&](const char* text) {
        Expr pat = parse_expr(text);
        return has_subexpression(fs, [&](const Expr& e) { return e == pat; });
    };
    if (has("sqrt(x^2+1)") || has("sqrt(1+x^2)")) {
        // x = tan(t); on the full window the whole branch ]-pi/2,pi/2[ is used.
        Expr inv = arctan(X());
        std::optional<DomainSet> Dg;
        if (full)
            Dg = single(Interval::make(Real::pi_multiple(Rational(-1, 2)), Real::pi_multiple(Rational(1, 2)), false,
                                       false),
                        gw);
        else
            Dg = preimage(D, inv, gw);
        if (Dg) subs.push_back({Fn::make(tan(X()), *Dg, {}, tol()), Direction::Inverse, inv});
    }
    if (has("sqrt(1-x^2)")) {
        // x = sin(t), t in [-pi/2, pi/2]; sin' vanishes at the ends.
        Expr inv = arcsin(X());
        if (auto Dg = preimage(D, inv, gw)) subs.push_back({Fn::make(sin(X()), *Dg, {}, tol()), Direction::InverseRelaxed, inv});
    }
    subs.insert(subs.end(), opt_.hooks.begin(), opt_.hooks.end());

    for (const Substitution& sub : subs) {
        std::size_t mark = trace.steps.size();
        try {
            switch (sub.direction) {
                case Direction::Inverse:
                    return Candidate{"", "", {}, inverse(target, sub, false, depth + 1).rule()};
                case Direction::InverseRelaxed:
                    return Candidate{"", "", {}, inverse(target, sub, true, depth + 1).rule()};
                case Direction::Forward:
                case Direction::Definite: {
                    // f = (phi o g)*g' with phi = (f/g') o g^-1.
                    if (!sub.inverse || !sub.g.is_uniform()) break;
                    Expr phi = simplify_basic(substitute(simplify_basic(fs / differentiate(sub.g.rule())), *sub.inverse));
                    phi = rewrite_on(phi, D, tol()).expr;
                    if (!domains_equal(sub.g.domain(), D).equal) break;
                    Fn base = forward(Fn::natural(phi, image_window(sub.g.rule(), D), tol()), sub.g, depth + 1);
                    return Candidate{"", "", {}, base.rule()};
                }
            }
        } catch (const Error&) {
            trace.steps.resize(mark);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Theorems

Fn Engine::by_parts(const Fn& f, const Fn& g, int depth) {
    if (!f.is_uniform() || !g.is_uniform())
        throw Error(ErrorCode::InvalidArgument, "by_parts needs one rule per function");
    std::vector<Evidence> ev;
    auto standard = [&](const DomainSet& d, const char* name) {
        StandardCheck sc = is_standard(d);
        std::string detail = sc.standard ? d.to_string() : sc.violations.front().clause;
        require(ev, {std::string(name) + " standard", EvidenceLevel::Symbolic, sc.standard, detail});
    };
    standard(f.domain(), "D_f");
    standard(g.domain(), "D_g");
    DomainSet I = intersect_or_empty(f.domain(), g.domain());
    standard(I, "D_f ∩ D_g");
    require(ev, {"D_f ∩ D_g nonempty", EvidenceLevel::Symbolic, !I.empty(), I.to_string()});
    auto c1 = [&](const Fn& h, const char* name) {
        Continuity k = continuity_class(h.rule(), I, tol());
        require(ev, {std::string(name) + " of class C1", EvidenceLevel::Symbolic, k == Continuity::C1,
                     format_expr(h.rule()) + " is " + std::string(to_string(k)) + " on " + I.to_string()});
    };
    c1(f, "f");
    c1(g, "g");

    Expr target = simplify_basic(f.rule() * differentiate(g.rule()));
    Fn G = solve(simplify_basic(differentiate(f.rule()) * g.rule()), I, depth + 1);
    ev.push_back({"P(f'*g) found", EvidenceLevel::Symbolic, true, format_expr(G.rule())});
    Expr R = detail::tidy(f.rule() * g.rule() - G.rule());
    Fn tf = Fn::make(target, I, {}, tol());
    std::vector<Evidence> gaps;
    Fn F = finish(R, I, [&tf](double x) { return tf(x).has_value(); }, gaps);
    record(F, tf, "by_parts", "IBP", ev, gaps);
    return F;
}

Fn Engine::forward(const Fn& f, const Fn& g, int depth) {
    if (!f.is_uniform() || !g.is_uniform())
        throw Error(ErrorCode::InvalidArgument, "subst_forward needs one rule per function");
    std::vector<Evidence> ev;
    const DomainSet& Dg = g.domain();
    Continuity k = continuity_class(g.rule(), Dg, tol());
    require(ev, {"g differentiable", EvidenceLevel::Symbolic, k == Continuity::C1,
                 format_expr(g.rule()) + " is " + std::string(to_string(k)) + " on " + Dg.to_string()});

    // Im_g ⊆ D_f: structurally through the natural domain of f o g, then by
    // sampling g against D_f itself (which may be smaller than f's natural
    // domain).
    Expr fog = substitute(f.rule(), g.rule());
    std::optional<Real> bad;
    try {
        bad = subset_witness(Dg, natural_domain(fog, Dg.window(), tol()));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyDomain) throw;
        bad = Dg.parts().empty() ? std::nullopt : std::optional<Real>(midpoint(Dg.parts()[0].lo, Dg.parts()[0].hi));
    }
    if (!bad) {
        for (double x : sample_set(Dg, 64)) {
            auto y = eval_at(g.rule(), x);
            if (!y || !f.domain().contains(*y)) {
                bad = snap(x);
                break;
            }
        }
    }
    require(ev, {"Im_g ⊆ D_f", EvidenceLevel::Numeric, !bad,
                 bad ? "g(" + bad->to_string() + ") is outside D_f = " + f.domain().to_string()
                     : "g maps " + Dg.to_string() + " into " + f.domain().to_string()},
            bad);

    Fn F = solve_fn(f, depth + 1);
    ev.push_back({"F in P(f)", EvidenceLevel::Symbolic, true, F.to_string()});

    Expr target = simplify_basic(fog * differentiate(g.rule()));
    Fn tf = Fn::make(target, Dg, {}, tol());
    Expr R = simplify_basic(substitute(F.rule(), g.rule()));
    std::vector<Evidence> gaps;
    Fn base = finish(R, Dg, [&tf](double x) { return tf(x).has_value(); }, gaps);
    record(base, tf, "subst_forward", "SUBST_FORWARD", ev, gaps);
    return base;
}

/// One end of the image of a monotone g: the value (closed end), the
/// one-sided limit, or an infinity when g blows up.
std::optional<std::pair<Real, bool>> image_end(const Expr& g, const Real& at, bool closed, int side) {
    double p = at.value();
    if (closed) {
        auto v = eval_at(g, p);
        if (!v) return std::nullopt;
        return std::make_pair(snap(*v), true);
    }
    auto near = eval_at(g, p + side * 1e-7 * (1.0 + std::abs(p)));
    if (near && std::abs(*near) > 1e6) return std::make_pair(Real::infinity(*near > 0), false);
    auto lim = one_sided_limit(g, p, side);
    if (!lim) return std::nullopt;
    return std::make_pair(snap(*lim), false);
}

Fn Engine::inverse(const Fn& f, const Substitution& sub, bool relaxed, int depth) {
    const Fn& g = sub.g;
    if (!sub.inverse) throw Error(ErrorCode::InvalidArgument, "inverse substitution needs g^-1");
    if (!f.is_uniform() || !g.is_uniform())
        throw Error(ErrorCode::InvalidArgument, "inverse substitution needs one rule per function");
    const Expr& inv = *sub.inverse;
    const DomainSet& Dg = g.domain();
    const DomainSet& Df = f.domain();
    std::vector<Evidence> ev;

    Continuity k = continuity_class(g.rule(), Dg, tol());
    require(ev, {"g differentiable", EvidenceLevel::Symbolic, k == Continuity::C1,
                 format_expr(g.rule()) + " is " + std::string(to_string(k)) + " on " + Dg.to_string()});

    Expr dg = differentiate(g.rule());
    std::vector<Real> zeros = zeros_on(dg, Dg, tol());
    std::optional<Real> interior_zero;
    for (const Real& z : zeros) {
        bool at_end = false;
        for (const Interval& c : Dg.parts())
            at_end = at_end || (c.lo_closed && equal(z, c.lo)) || (c.hi_closed && equal(z, c.hi));
        if (!relaxed || !at_end) {
            interior_zero = z;
            break;
        }
    }
    std::string gname = format_expr(g.rule()) + " on " + Dg.to_string();
    if (relaxed)
        require(ev, {"g injective (g' vanishes only at endpoints of D_g)", EvidenceLevel::Numeric, !interior_zero,
                     interior_zero ? "g' = " + format_expr(dg) + " vanishes at " + interior_zero->to_string()
                                   : gname + ": g' = " + format_expr(dg) + " has no interior zero"},
                interior_zero);
    else
        require(ev, {"g' nonvanishing on D_g (diffeomorphism)", EvidenceLevel::Numeric, !interior_zero,
                     interior_zero ? "g' = " + format_expr(dg) + " vanishes at " + interior_zero->to_string()
                                   : gname + ": g' = " + format_expr(dg) + " has no zero"},
                interior_zero);

    if (relaxed) {
        ev.push_back({"g^-1 continuous", EvidenceLevel::Symbolic, true,
                      "inverse of a continuous strictly monotone function on an interval"});
        CheckReport fc = has_primitive(f, tol());
        const Evidence* bad = fc.failed_evidence();
        require(ev, {"f continuous", EvidenceLevel::Numeric, fc.passed(), fc.passed() ? Df.to_string() : (bad ? bad->detail : fc.message)},
                fc.witness);
    }

    // Im_g = D_f.
    std::vector<Interval> image;
    bool image_ok = true;
    for (const Interval& c : Dg.parts()) {
        auto a = image_end(g.rule(), c.lo, c.lo_closed, 1);
        auto b = image_end(g.rule(), c.hi, c.hi_closed, -1);
        if (!a || !b) {
            image_ok = false;
            break;
        }
        if (less(b->first, a->first)) std::swap(a, b);
        if (!less(a->first, b->first)) {
            image_ok = false;
            break;
        }
        image.push_back(Interval::make(a->first, b->first, a->second && a->first.is_finite(),
                                       b->second && b->first.is_finite()));
    }
    DomainComparison cmp;
    DomainSet Im(Df.window());
    if (image_ok) {
        Im = DomainSet::from_parts(image, Df.window());
        cmp = domains_equal(Im, Df);
    } else {
        cmp.equal = false;
        cmp.detail = "image endpoints could not be resolved";
    }
    require(ev, {"Im_g = D_f", EvidenceLevel::Numeric, cmp.equal,
                 cmp.equal ? Im.to_string() : "Im_g = " + Im.to_string() + ", D_f = " + Df.to_string() +
                                                  (cmp.witness ? ", witness " + cmp.witness->to_string() : "")},
            cmp.witness);

    // g(g^-1(y)) = y.
    std::optional<Real> inv_bad;
    for (double y : sample_set(Df, 64)) {
        auto t = eval_at(inv, y);
        auto back = t ? eval_at(g.rule(), *t) : std::nullopt;
        if (!t || !Dg.contains(*t) || !back || std::abs(*back - y) > 1e-9 * (1.0 + std::abs(y))) {
            inv_bad = snap(y);
            break;
        }
    }
    require(ev, {"g(g^-1(y)) = y on D_f", EvidenceLevel::Numeric, !inv_bad,
                 inv_bad ? "fails at y = " + inv_bad->to_string() : "g^-1 = " + format_expr(inv) + " at 64 samples"},
            inv_bad, ErrorCode::InverseUnverified, Reason::InverseUnverified);

    // H in P((f o g)*g') on D_g, then H o g^-1 on D_f.
    Expr pulled = simplify_basic(substitute(f.rule(), g.rule()) * dg);
    auto rw = rewrite_on(pulled, Dg, tol());
    if (rw.evidence) ev.push_back(*rw.evidence);
    Fn H = solve(rw.expr, Dg, depth + 1);
    ev.push_back({"H in P((f o g)*g')", EvidenceLevel::Symbolic, true, format_expr(H.rule())});
    auto back = rewrite_on(simplify_basic(substitute(H.rule(), inv)), Df, tol());
    if (back.evidence) ev.push_back(*back.evidence);

    std::vector<Evidence> gaps;
    Fn F = finish(back.expr, Df, [&f](double x) { return f(x).has_value(); }, gaps);
    record(F, f, relaxed ? "subst_inverse_relaxed" : "subst_inverse", relaxed ? "SUBST_RELAXED" : "SUBST_INVERSE",
           ev, gaps);
    return F;
}

[[noreturn]] void rethrow_with(const Error& e, const RuleTrace& trace) {
    if (e.code() == ErrorCode::RuleNotFound && !e.trace()) throw Error(e.code(), e.what(), trace);
    throw;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<Fn> base_table(const Expr& f_rule, const DomainSet& D, const Tolerances& tol) {
    auto hit = table_rule(simplify_basic(f_rule));
    if (!hit) return std::nullopt;
    try {
        return Fn::make(hit->base, D, {}, tol);
    } catch (const Error&) {
        return std::nullopt;
    }
}

Derivation by_parts(const Fn& f, const Fn& g, const RuleOptions& opts) {
    Engine e(opts);
    try {
        Fn F = e.by_parts(f, g, 0);
        DomainSet I = intersect(f.domain(), g.domain());
        Fn target = Fn::make(simplify_basic(f.rule() * differentiate(g.rule())), I, {}, opts.tol);
        PrimitiveFamily fam = family_from_base(F, target, opts.tol);
        e.stitch(fam);
        return {fam, e.trace};
    } catch (const Error& err) {
        rethrow_with(err, e.trace);
    }
}

Derivation subst_forward(const Fn& f, const Fn& g, const RuleOptions& opts) {
    Engine e(opts);
    try {
        Fn F = e.forward(f, g, 0);
        Expr target = simplify_basic(substitute(f.rule(), g.rule()) * differentiate(g.rule()));
        PrimitiveFamily fam = family_from_base(F, Fn::make(target, g.domain(), {}, opts.tol), opts.tol);
        e.stitch(fam);
        return {fam, e.trace};
    } catch (const Error& err) {
        rethrow_with(err, e.trace);
    }
}

Derivation subst_inverse(const Fn& f, const Substitution& sub, const RuleOptions& opts) {
    Engine e(opts);
    try {
        Fn F = e.inverse(f, sub, false, 0);
        PrimitiveFamily fam = family_from_base(F, f, opts.tol);
        e.stitch(fam);
        return {fam, e.trace};
    } catch (const Error& err) {
        rethrow_with(err, e.trace);
    }
}

Derivation subst_inverse_relaxed(const Fn& f, const Substitution& sub, const RuleOptions& opts) {
    Engine e(opts);
    try {
        Fn F = e.inverse(f, sub, true, 0);
        PrimitiveFamily fam = family_from_base(F, f, opts.tol);
        e.stitch(fam);
        return {fam, e.trace};
    } catch (const Error& err) {
        rethrow_with(err, e.trace);
    }
}

Derivation antiderive(const Fn& f, const RuleOptions& opts) {
    Engine e(opts);
    try {
        Fn F = e.solve_fn(f, 0);
        PrimitiveFamily fam = family_from_base(F, f, opts.tol);
        e.stitch(fam);
        return {fam, e.trace};
    } catch (const Error& err) {
        rethrow_with(err, e.trace);
    }
}

namespace {

void same_component(const DomainSet& d, const Real& a, const Real& b, const char* what) {
    auto ca = d.component_of(a.value());
    auto cb = d.component_of(b.value());
    if (!ca || !cb || *ca != *cb)
        throw Error(ErrorCode::DomainViolation, std::string(what) + ": [" + a.to_string() + ", " + b.to_string() +
                                                    "] is not inside one component of " + d.to_string());
}

void cross_check(DefiniteResult& r, const Tolerances& tol) {
    double diff = std::abs(r.value - r.cross_check);
    if (diff > tol.cross_check)
        throw Error(ErrorCode::CrossCheckMismatch,
                    "primitive gives " + fmt(r.value) + ", quadrature gives " + fmt(r.cross_check), r.trace);
}

}  // namespace

DefiniteResult defint(const Fn& f, const Real& a, const Real& b, const RuleOptions& opts) {
    same_component(f.domain(), a, b, "defint");
    DefiniteResult r;
    double q = quadrature(f.rule_at(midpoint(a, b).value()), a, b, opts.tol);
    r.cross_check = q;
    try {
        Derivation d = antiderive(f, opts);
        r.trace = d.trace;
        const Fn& F = d.family.base();
        auto Fa = F(a.value());
        auto Fb = F(b.value());
        if (!Fa || !Fb) throw Error(ErrorCode::DomainViolation, "primitive undefined at an endpoint");
        r.value = *Fb - *Fa;
        r.trace.steps.push_back(
            {"ftc2",
             "FTC2",
             {{"[a,b] inside one component of D_f", EvidenceLevel::Numeric, true, "[" + a.to_string() + ", " + b.to_string() + "]"},
              {"F in P(f)", EvidenceLevel::Symbolic, true, F.to_string()},
              {"quadrature cross-check", EvidenceLevel::Numeric, std::abs(r.value - q) <= opts.tol.cross_check,
               "quadrature " + fmt(q) + ", difference " + fmt(std::abs(r.value - q))}},
             fmt(r.value)});
    } catch (const Error& e) {
        if (e.code() != ErrorCode::RuleNotFound) throw;
        r.value = q;
        r.fallback = true;
        r.trace.steps.push_back({"quadrature_fallback",
                                 "QUADRATURE",
                                 {{"no primitive found by the rules", EvidenceLevel::Numeric, true, e.what()}},
                                 fmt(q)});
    }
    cross_check(r, opts.tol);
    return r;
}

DefiniteResult defint_change_of_vars(const Fn& f, const Fn& g, const Real& a, const Real& b, const RuleOptions& opts) {
    if (!g.is_uniform() || !f.is_uniform())
        throw Error(ErrorCode::InvalidArgument, "change of variables needs one rule per function");
    Engine eng(opts);
    std::vector<Evidence> ev;
    const Tolerances& tol = opts.tol;
    bool ordered = !less(b, a);
    const Real& lo = ordered ? a : b;
    const Real& hi = ordered ? b : a;
    DomainSet I = DomainSet::from_parts({Interval::make(lo, hi, true, true)}, g.window());

    auto require = [&](Evidence e, std::optional<Real> witness = std::nullopt) {
        if (!e.holds && opts.assume_unverified) {
            e.level = EvidenceLevel::Assumed;
            e.detail = "check failed (" + e.detail + "), assumed on request";
            e.holds = true;
        }
        ev.push_back(e);
        if (e.holds) return;
        CheckReport rep;
        for (const auto& x : ev) rep.add(x);
        rep.fail(Reason::HypothesisUnverified, e.hypothesis + " not verified: " + e.detail);
        rep.witness = witness;
        throw Error(ErrorCode::HypothesisUnverified, rep.message, rep);
    };

    Continuity k = continuity_class(g.rule(), I, tol);
    require({"g of class C1 on [a,b]", EvidenceLevel::Symbolic, k == Continuity::C1,
             format_expr(g.rule()) + " is " + std::string(to_string(k)) + " on " + I.to_string()});
    CheckReport fc = has_primitive(f, tol);
    require({"f continuous", EvidenceLevel::Numeric, fc.passed(), fc.passed() ? f.domain().to_string() : fc.message},
            fc.witness);
    std::optional<std::size_t> comp;
    std::optional<Real> outside;
    for (double t : sample_set(I, 256)) {
        auto y = eval_at(g.rule(), t);
        auto c = y ? f.domain().component_of(*y) : std::nullopt;
        if (!c || (comp && *c != *comp)) {
            outside = snap(t);
            break;
        }
        comp = c;
    }
    require({"g([a,b]) inside one component of D_f", EvidenceLevel::Numeric, !outside,
             outside ? "g(" + outside->to_string() + ") leaves it" : "256 samples"},
            outside);

    auto ga = eval_at(g.rule(), a.value());
    auto gb = eval_at(g.rule(), b.value());
    Real ya = snap(*ga);
    Real yb = snap(*gb);
    Expr pulled = simplify_basic(substitute(f.rule(), g.rule()) * differentiate(g.rule()));

    DefiniteResult r;
    std::string side;
    try {
        Derivation d = antiderive(f, opts);
        r.trace = d.trace;
        const Fn& F = d.family.base();
        r.value = *F(yb.value()) - *F(ya.value());
        r.cross_check = quadrature(pulled, a, b, tol);
        side = "F(g(b)) - F(g(a)) with F = " + F.to_string();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::RuleNotFound) throw;
        try {
            Derivation d = antiderive(Fn::make(pulled, I, {}, tol), opts);
            r.trace = d.trace;
            const Fn& K = d.family.base();
            r.value = *K(b.value()) - *K(a.value());
            r.cross_check = quadrature(f.rule(), ya, yb, tol);
            side = "K(b) - K(a) with K = " + K.to_string();
        } catch (const Error& e2) {
            if (e2.code() != ErrorCode::RuleNotFound) throw;
            r.value = quadrature(pulled, a, b, tol);
            r.cross_check = quadrature(f.rule(), ya, yb, tol);
            r.fallback = true;
            side = "no primitive on either side; quadrature of both";
        }
    }
    ev.push_back({"quadrature cross-check", EvidenceLevel::Numeric,
                  std::abs(r.value - r.cross_check) <= tol.cross_check,
                  "other side " + fmt(r.cross_check) + ", difference " + fmt(std::abs(r.value - r.cross_check))});
    ev.push_back({"evaluation", EvidenceLevel::Symbolic, true, side});
    r.trace.steps.push_back({"change_of_variables", "SUBST_DEFINITE", ev, fmt(r.value)});
    cross_check(r, tol);
    return r;
}

}  // namespace primcalc
