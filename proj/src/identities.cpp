// SPDX-License-Identifier: Apache-2.0
#include "identities.hpp"

#include <algorithm>
#include <cmath>

namespace primcalc::detail {

namespace {

constexpr std::size_t kSamples = 64;

bool is_pow_of(const Expr& e, Op inner, std::int64_t n) {
    return e.op() == Op::Pow && e.exponent() == Rational(n) && e.child().op() == inner;
}

/// tan(v)^2 + 1 or 1 + tan(v)^2; returns v.
std::optional<Expr> match_tan_sq_plus_one(const Expr& s) {
    if (s.op() != Op::Add) return std::nullopt;
    if (is_pow_of(s.lhs(), Op::Tan, 2) && s.rhs().is_one()) return s.lhs().child().child();
    if (is_pow_of(s.rhs(), Op::Tan, 2) && s.lhs().is_one()) return s.rhs().child().child();
    return std::nullopt;
}

/// 1 - f(v)^2; returns v.
std::optional<Expr> match_one_minus_sq(const Expr& s, Op f) {
    if (s.op() != Op::Sub || !s.lhs().is_one()) return std::nullopt;
    if (is_pow_of(s.rhs(), f, 2)) return s.rhs().child().child();
    return std::nullopt;
}

struct Pass {
    const DomainSet& on;
    std::vector<std::string>& applied;

    void note(const char* name) {
        if (std::find(applied.begin(), applied.end(), name) == applied.end()) applied.emplace_back(name);
    }

    Expr node(const Expr& e) {
        switch (e.op()) {
            case Op::Tan:
                if (e.child().op() == Op::Arctan) {
                    note("tan(arctan(u)) = u");
                    return e.child().child();
                }
                break;
            case Op::Sin:
                if (e.child().op() == Op::Arcsin) {
                    note("sin(arcsin(u)) = u");
                    return e.child().child();
                }
                break;
            case Op::Cos:
                if (e.child().op() == Op::Arcsin) {
                    note("cos(arcsin(u)) = sqrt(1-u^2)");
                    return sqrt(num(1) - pow(e.child().child(), Rational(2)));
                }
                break;
            case Op::Sec:
                if (e.child().op() == Op::Arctan) {
                    note("sec(arctan(u)) = sqrt(u^2+1)");
                    return sqrt(pow(e.child().child(), Rational(2)) + num(1));
                }
                break;
            case Op::Sqrt: {
                if (auto v = match_tan_sq_plus_one(e.child())) {
                    note("sqrt(tan(v)^2+1) = abs(sec(v))");
                    return abs(sec(*v));
                }
                if (auto v = match_one_minus_sq(e.child(), Op::Sin)) {
                    note("sqrt(1-sin(v)^2) = abs(cos(v))");
                    return abs(cos(*v));
                }
                if (auto v = match_one_minus_sq(e.child(), Op::Cos)) {
                    note("sqrt(1-cos(v)^2) = abs(sin(v))");
                    return abs(sin(*v));
                }
                break;
            }
            case Op::Abs: {
                auto s = sign_on(e.child(), on);
                if (s) {
                    note(*s > 0 ? "abs(u) = u where u >= 0" : "abs(u) = -u where u <= 0");
                    return *s > 0 ? e.child() : -e.child();
                }
                break;
            }
            case Op::Mul:
            case Op::Div: {
                Expr c = collect_powers(e);
                if (!(c == e)) {
                    note("equal factors collected into powers");
                    return c;
                }
                break;
            }
            default: break;
        }
        return e;
    }

    Expr walk(const Expr& e) {
        Expr r;
        switch (e.op()) {
            case Op::Const:
            case Op::Var: return e;
            case Op::Pow: r = pow(walk(e.child()), e.exponent()); break;
            default:
                r = e.arity() == 1 ? Expr::make_unary(e.op(), walk(e.child()))
                                   : Expr::make_binary(e.op(), walk(e.lhs()), walk(e.rhs()));
        }
        return node(r);
    }
};

struct Factor {
    Expr base;
    Rational exponent;
};

void gather(const Expr& e, const Rational& sign, Rational& coef, std::vector<Factor>& out) {
    switch (e.op()) {
        case Op::Mul:
            gather(e.lhs(), sign, coef, out);
            gather(e.rhs(), sign, coef, out);
            return;
        case Op::Div:
            gather(e.lhs(), sign, coef, out);
            gather(e.rhs(), -sign, coef, out);
            return;
        case Op::Neg:
            coef = -coef;
            gather(e.child(), sign, coef, out);
            return;
        case Op::Const:
            if (e.constant().is_rational() && !e.is_zero()) {
                coef = sign.is_negative() ? coef / e.constant().coef : coef * e.constant().coef;
                return;
            }
            break;
        case Op::Pow:
            if (e.exponent().is_integer()) {
                out.push_back({e.child(), e.exponent() * sign});
                return;
            }
            break;
        default: break;
    }
    out.push_back({e, sign});
}

Expr power(const Expr& base, const Rational& n) { return n == Rational(1) ? base : pow(base, n); }

}  // namespace

Expr collect_powers(const Expr& e) {
    if (e.op() != Op::Mul && e.op() != Op::Div) return e;
    Rational coef(1);
    std::vector<Factor> raw;
    gather(e, Rational(1), coef, raw);
    std::vector<Factor> merged;
    bool repeated = false;
    for (const Factor& f : raw) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const Factor& m) { return m.base == f.base; });
        if (it == merged.end()) {
            merged.push_back(f);
        } else {
            it->exponent = it->exponent + f.exponent;
            repeated = true;
        }
    }
    if (!repeated) return e;
    std::optional<Expr> top;
    std::optional<Expr> bottom;
    for (const Factor& f : merged) {
        if (f.exponent.is_zero()) continue;
        if (f.exponent.is_negative()) {
            Expr p = power(f.base, -f.exponent);
            bottom = bottom ? *bottom * p : p;
        } else {
            Expr p = power(f.base, f.exponent);
            top = top ? *top * p : p;
        }
    }
    Expr numer = top ? *top : num(1);
    Expr result = bottom ? numer / *bottom : numer;
    if (coef != Rational(1)) result = num(coef) * result;
    return simplify_basic(result);
}

Expr tidy(const Expr& e) {
    Expr r;
    switch (e.op()) {
        case Op::Const:
        case Op::Var: return e;
        case Op::Pow: r = pow(tidy(e.child()), e.exponent()); break;
        default:
            r = e.arity() == 1 ? Expr::make_unary(e.op(), tidy(e.child()))
                               : Expr::make_binary(e.op(), tidy(e.lhs()), tidy(e.rhs()));
    }
    return simplify_basic(collect_powers(r));
}

std::vector<double> sample_set(const DomainSet& on, std::size_t per_component) {
    std::vector<double> xs;
    for (const Interval& c : on.parts()) {
        double a = c.lo.value();
        double b = c.hi.value();
        if (c.lo_closed) xs.push_back(a);
        for (std::size_t j = 0; j < per_component; ++j)
            xs.push_back(a + (static_cast<double>(j) + 0.5) / static_cast<double>(per_component) * (b - a));
        if (c.hi_closed) xs.push_back(b);
    }
    return xs;
}

std::optional<int> sign_on(const Expr& e, const DomainSet& on) {
    bool nonneg = true;
    bool nonpos = true;
    std::size_t seen = 0;
    for (double x : sample_set(on, kSamples)) {
        auto v = eval_at(e, x);
        if (!v) continue;
        ++seen;
        if (*v < 0) nonneg = false;
        if (*v > 0) nonpos = false;
    }
    if (seen == 0) return std::nullopt;
    if (nonneg) return 1;
    if (nonpos) return -1;
    return std::nullopt;
}

bool agree_on(const Expr& a, const Expr& b, const DomainSet& on, std::string* detail) {
    std::size_t checked = 0;
    for (double x : sample_set(on, kSamples)) {
        auto va = eval_at(a, x);
        if (!va) continue;
        auto vb = eval_at(b, x);
        if (!vb || std::abs(*va - *vb) > 1e-9 * (1.0 + std::abs(*va))) {
            if (detail) *detail = "disagree at " + Real::from_double(x).to_string();
            return false;
        }
        ++checked;
    }
    if (detail) *detail = std::to_string(checked) + " sample points agree";
    return checked > 0;
}

Rewrite rewrite_on(const Expr& e, const DomainSet& on, const Tolerances& tol) {
    (void)tol;
    std::vector<std::string> applied;
    Pass pass{on, applied};
    Expr cur = simplify_basic(e);
    for (int round = 0; round < 6; ++round) {
        Expr next = simplify_basic(pass.walk(cur));
        if (next == cur) break;
        cur = next;
    }
    if (applied.empty()) return {e, {}, std::nullopt};
    std::string detail;
    bool ok = agree_on(e, cur, on, &detail);
    std::string names;
    for (const auto& a : applied) names += (names.empty() ? "" : "; ") + a;
    Evidence ev{"rewrite " + format_expr(e) + " -> " + format_expr(cur) + " on " + on.to_string(),
                EvidenceLevel::Numeric, ok, names + "; " + detail};
    if (!ok) return {e, {}, ev};
    return {cur, applied, ev};
}

}  // namespace primcalc::detail
