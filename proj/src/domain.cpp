// SPDX-License-Identifier: Apache-2.0
#include "primcalc/domain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "primcalc/calculus.hpp"
#include "primcalc/error.hpp"

namespace primcalc {

namespace {

bool lt(const Real& a, const Real& b) { return less(a, b); }
bool eq(const Real& a, const Real& b) { return equal(a, b); }

const char* kUnion = " ∪ ";

}  // namespace

std::string Window::to_string() const { return "(" + lo.to_string() + ", " + hi.to_string() + ")"; }

Window make_window(const Real& lo, const Real& hi) {
    if (!lo.is_finite() || !hi.is_finite())
        throw Error(ErrorCode::InvalidArgument, "window endpoints must be finite");
    if (!lt(lo, hi))
        throw Error(ErrorCode::InvalidArgument,
                    "window needs lo < hi, got (" + lo.to_string() + ", " + hi.to_string() + ")");
    return Window{lo, hi};
}

Interval Interval::make(Real lo, Real hi, bool lo_closed, bool hi_closed) {
    if (!lt(lo, hi))
        throw Error(ErrorCode::InvalidArgument,
                    "interval needs lo < hi, got " + lo.to_string() + " and " + hi.to_string());
    if ((!lo.is_finite() && lo_closed) || (!hi.is_finite() && hi_closed))
        throw Error(ErrorCode::InvalidArgument, "an infinite endpoint must be open");
    return Interval{std::move(lo), std::move(hi), lo_closed, hi_closed};
}

bool Interval::contains(double x) const {
    double a = lo.value();
    double b = hi.value();
    bool left = lo_closed ? x >= a : x > a;
    bool right = hi_closed ? x <= b : x < b;
    return left && right;
}

bool Interval::contains(const Real& x) const {
    auto l = compare(x, lo);
    auto r = compare(x, hi);
    bool left = l == std::partial_ordering::greater || (lo_closed && l == std::partial_ordering::equivalent);
    bool right = r == std::partial_ordering::less || (hi_closed && r == std::partial_ordering::equivalent);
    return left && right;
}

std::string Interval::to_string() const {
    std::string s = lo_closed ? "[" : "]";
    s += lo.to_string();
    s += ',';
    s += hi.to_string();
    s += hi_closed ? "]" : "[";
    return s;
}

DomainSet DomainSet::from_parts_raw(std::vector<Interval> parts, Window w) {
    DomainSet d(std::move(w));
    d.parts_ = std::move(parts);
    return d;
}

DomainSet DomainSet::from_parts(std::vector<Interval> parts, Window w) {
    std::vector<Interval> clipped;
    for (Interval p : parts) {
        if (!lt(w.lo, p.lo)) {
            p.lo = w.lo;
            p.lo_closed = false;
        }
        if (!lt(p.hi, w.hi)) {
            p.hi = w.hi;
            p.hi_closed = false;
        }
        if (lt(p.lo, p.hi)) clipped.push_back(std::move(p));
    }
    std::sort(clipped.begin(), clipped.end(), [](const Interval& a, const Interval& b) {
        if (eq(a.lo, b.lo)) return a.lo_closed && !b.lo_closed;
        return lt(a.lo, b.lo);
    });
    std::vector<Interval> merged;
    for (Interval& p : clipped) {
        if (!merged.empty()) {
            Interval& cur = merged.back();
            bool overlap = lt(p.lo, cur.hi);
            bool touch = eq(p.lo, cur.hi) && (cur.hi_closed || p.lo_closed);
            if (overlap || touch) {
                if (eq(p.hi, cur.hi)) {
                    cur.hi_closed = cur.hi_closed || p.hi_closed;
                } else if (lt(cur.hi, p.hi)) {
                    cur.hi = p.hi;
                    cur.hi_closed = p.hi_closed;
                }
                continue;
            }
        }
        merged.push_back(std::move(p));
    }
    DomainSet d(std::move(w));
    d.parts_ = std::move(merged);
    return d;
}

DomainSet DomainSet::full(Window w) {
    Interval all{w.lo, w.hi, false, false};
    DomainSet d(std::move(w));
    d.parts_.push_back(std::move(all));
    return d;
}

bool DomainSet::contains(double x) const {
    return std::any_of(parts_.begin(), parts_.end(), [x](const Interval& p) { return p.contains(x); });
}

bool DomainSet::contains(const Real& x) const {
    return std::any_of(parts_.begin(), parts_.end(), [&x](const Interval& p) { return p.contains(x); });
}

std::optional<std::size_t> DomainSet::component_of(double x) const {
    for (std::size_t i = 0; i < parts_.size(); ++i)
        if (parts_[i].contains(x)) return i;
    return std::nullopt;
}

std::string DomainSet::to_string() const {
    if (parts_.empty()) return "∅";
    std::string s;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += kUnion;
        s += parts_[i].to_string();
    }
    return s;
}

namespace {

void require_same_window(const DomainSet& a, const DomainSet& b) {
    if (!(a.window() == b.window()))
        throw Error(ErrorCode::WindowMismatch,
                    "domains use different windows " + a.window().to_string() + " and " + b.window().to_string());
}

}  // namespace

DomainSet intersect_or_empty(const DomainSet& a, const DomainSet& b) {
    require_same_window(a, b);
    std::vector<Interval> out;
    for (const Interval& p : a.parts()) {
        for (const Interval& q : b.parts()) {
            Interval r;
            if (eq(p.lo, q.lo)) {
                r.lo = p.lo;
                r.lo_closed = p.lo_closed && q.lo_closed;
            } else if (lt(p.lo, q.lo)) {
                r.lo = q.lo;
                r.lo_closed = q.lo_closed;
            } else {
                r.lo = p.lo;
                r.lo_closed = p.lo_closed;
            }
            if (eq(p.hi, q.hi)) {
                r.hi = p.hi;
                r.hi_closed = p.hi_closed && q.hi_closed;
            } else if (lt(p.hi, q.hi)) {
                r.hi = p.hi;
                r.hi_closed = p.hi_closed;
            } else {
                r.hi = q.hi;
                r.hi_closed = q.hi_closed;
            }
            if (lt(r.lo, r.hi)) out.push_back(std::move(r));
        }
    }
    return DomainSet::from_parts(std::move(out), a.window());
}

DomainSet intersect(const DomainSet& a, const DomainSet& b) {
    DomainSet r = intersect_or_empty(a, b);
    if (r.empty())
        throw Error(ErrorCode::EmptyDomain,
                    "intersection of " + a.to_string() + " and " + b.to_string() + " has no interval");
    return r;
}

DomainSet unite(const DomainSet& a, const DomainSet& b) {
    require_same_window(a, b);
    std::vector<Interval> all = a.parts();
    all.insert(all.end(), b.parts().begin(), b.parts().end());
    return DomainSet::from_parts(std::move(all), a.window());
}

DomainSet remove_points(const DomainSet& d, const std::vector<Real>& points) {
    std::vector<Interval> parts = d.parts();
    for (const Real& x : points) {
        std::vector<Interval> next;
        for (Interval& p : parts) {
            if (!p.contains(x)) {
                next.push_back(std::move(p));
                continue;
            }
            if (eq(x, p.lo)) {
                p.lo_closed = false;
                next.push_back(std::move(p));
            } else if (eq(x, p.hi)) {
                p.hi_closed = false;
                next.push_back(std::move(p));
            } else {
                next.push_back(Interval{p.lo, x, p.lo_closed, false});
                next.push_back(Interval{x, p.hi, false, p.hi_closed});
            }
        }
        parts = std::move(next);
    }
    return DomainSet::from_parts(std::move(parts), d.window());
}

std::vector<Interval> components(const DomainSet& d) { return d.parts(); }

StandardCheck is_standard(const DomainSet& d) {
    StandardCheck out;
    auto flag = [&out](std::size_t i, const char* clause, std::string detail) {
        out.standard = false;
        out.violations.push_back({i, clause, std::move(detail)});
    };
    const auto& parts = d.parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const Interval& p = parts[i];
        if (!lt(p.lo, p.hi))
            flag(i, "positive_length", p.to_string() + " is not an interval of positive length");
        if ((!p.lo.is_finite() && p.lo_closed) || (!p.hi.is_finite() && p.hi_closed))
            flag(i, "infinite_endpoint_open", p.to_string() + " closes an infinite endpoint");
        if (lt(p.lo, d.window().lo) || lt(d.window().hi, p.hi))
            flag(i, "within_window", p.to_string() + " leaves the window " + d.window().to_string());
        if (i == 0) continue;
        const Interval& q = parts[i - 1];
        if (lt(p.lo, q.hi) || (eq(p.lo, q.hi) && p.lo_closed && q.hi_closed)) {
            flag(i, "disjoint", q.to_string() + " and " + p.to_string() + " overlap");
        } else if (eq(p.lo, q.hi) && (p.lo_closed || q.hi_closed)) {
            flag(i, "separated", q.to_string() + " and " + p.to_string() + " meet at " + p.lo.to_string() +
                                     " with no excluded point between them");
        }
    }
    return out;
}

Real midpoint(const Real& a, const Real& b) {
    if (a.is_exact() && a.kind() == b.kind()) {
        Rational m = (a.coefficient() + b.coefficient()) / Rational(2);
        return a.kind() == Real::Kind::Rational ? Real::rational(m) : Real::pi_multiple(m);
    }
    return Real::from_double((a.value() + b.value()) / 2.0);
}

namespace {

/// Endpoints of both sets plus the window edges, sorted and deduplicated,
/// and the midpoints between neighbours: every region on which membership in
/// either set is constant contains one probe.
std::vector<Real> probe_points(const DomainSet& a, const DomainSet& b) {
    std::vector<Real> ends{a.window().lo, a.window().hi};
    for (const DomainSet* s : {&a, &b})
        for (const Interval& p : s->parts()) {
            if (p.lo.is_finite()) ends.push_back(p.lo);
            if (p.hi.is_finite()) ends.push_back(p.hi);
        }
    std::sort(ends.begin(), ends.end(), lt);
    ends.erase(std::unique(ends.begin(), ends.end(), eq), ends.end());
    std::vector<Real> probes;
    for (std::size_t i = 0; i < ends.size(); ++i) {
        if (i > 0) probes.push_back(midpoint(ends[i - 1], ends[i]));
        probes.push_back(ends[i]);
    }
    return probes;
}

}  // namespace

DomainComparison domains_equal(const DomainSet& a, const DomainSet& b) {
    require_same_window(a, b);
    DomainComparison out;
    for (const Real& x : probe_points(a, b)) {
        bool in_a = a.contains(x);
        bool in_b = b.contains(x);
        if (in_a != in_b) {
            out.equal = false;
            out.witness = x;
            out.detail = x.to_string() + (in_a ? " is in the first domain only" : " is in the second domain only");
            return out;
        }
    }
    return out;
}

std::optional<Real> subset_witness(const DomainSet& a, const DomainSet& b, const std::vector<Real>& extra_points) {
    require_same_window(a, b);
    for (const Real& x : probe_points(a, b)) {
        if (!a.contains(x) || b.contains(x)) continue;
        bool allowed = std::any_of(extra_points.begin(), extra_points.end(),
                                   [&x](const Real& p) { return eq(p, x); });
        if (!allowed) return x;
    }
    return std::nullopt;
}

Real parse_real(std::string_view text) {
    std::string s(text);
    std::string t;
    for (char c : s)
        if (c != ' ') t += c;
    if (t == "inf" || t == "+inf") return Real::infinity(true);
    if (t == "-inf") return Real::infinity(false);
    // "4pi" is shorthand for 4*pi.
    std::string expanded;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0 && (t[i] == 'p' || t[i] == 'e') && (std::isdigit(static_cast<unsigned char>(t[i - 1])) || t[i - 1] == '.'))
            expanded += '*';
        expanded += t[i];
    }
    Expr e = parse_expr(expanded);
    if (contains_var(e)) throw Error(ErrorCode::InvalidArgument, "'" + s + "' is not a constant");
    auto v = constant_value(e);
    if (!v || !v->is_finite()) throw Error(ErrorCode::InvalidArgument, "'" + s + "' is not a finite constant");
    return *v;
}

// ---------------------------------------------------------------------------
// Natural domain

namespace {

enum class Keep { Positive, NonNegative, NonZero };

Sign sign_on(const Expr& u, const Real& lo, const Real& hi) {
    double a = lo.value();
    double b = hi.value();
    for (double f : {0.5, 0.25, 0.75, 0.125, 0.875}) {
        auto v = eval_at(u, a + f * (b - a));
        if (!v) continue;
        if (*v > 0) return Sign::Positive;
        if (*v < 0) return Sign::Negative;
        return Sign::Zero;
    }
    return Sign::Undefined;
}

/// The part of d (the natural domain of u) where u > 0, u >= 0 or u != 0.
DomainSet select(const Expr& u, const DomainSet& d, Keep keep, const Tolerances& tol) {
    if (d.empty()) return d;
    if (!contains_var(u)) {
        auto v = eval_at(u, 0.0);
        bool ok = v && ((keep == Keep::Positive && *v > 0) || (keep == Keep::NonNegative && *v >= 0) ||
                        (keep == Keep::NonZero && *v != 0));
        return ok ? d : DomainSet(d.window());
    }
    std::vector<Real> zeros = zeros_on(u, d, tol);
    bool zero_closed = keep == Keep::NonNegative;
    std::vector<Interval> out;
    for (const Interval& c : d.parts()) {
        std::vector<Real> cuts;
        for (const Real& z : zeros)
            if (c.contains(z)) cuts.push_back(z);
        std::vector<std::pair<Real, bool>> marks;  // point, closed-from-inside
        marks.emplace_back(c.lo, c.lo_closed);
        for (const Real& z : cuts) {
            if (eq(z, c.lo) || eq(z, c.hi)) continue;
            marks.emplace_back(z, zero_closed);
        }
        marks.emplace_back(c.hi, c.hi_closed);
        bool lo_is_zero = c.lo_closed && std::any_of(cuts.begin(), cuts.end(), [&](const Real& z) { return eq(z, c.lo); });
        bool hi_is_zero = c.hi_closed && std::any_of(cuts.begin(), cuts.end(), [&](const Real& z) { return eq(z, c.hi); });
        if (lo_is_zero) marks.front().second = zero_closed;
        if (hi_is_zero) marks.back().second = zero_closed;
        for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
            const auto& [a, a_closed] = marks[i];
            const auto& [b, b_closed] = marks[i + 1];
            if (!lt(a, b)) continue;
            Sign s = sign_on(u, a, b);
            bool take = false;
            switch (keep) {
                case Keep::Positive: take = s == Sign::Positive; break;
                case Keep::NonNegative: take = s == Sign::Positive || s == Sign::Zero; break;
                case Keep::NonZero: take = s == Sign::Positive || s == Sign::Negative; break;
            }
            if (take) out.push_back(Interval{a, b, a_closed, b_closed});
        }
    }
    return DomainSet::from_parts(std::move(out), d.window());
}

DomainSet domain_of(const Expr& e, const Window& w, const Tolerances& tol) {
    switch (e.op()) {
        case Op::Const:
        case Op::Var: return DomainSet::full(w);
        case Op::Neg:
        case Op::Abs:
        case Op::Exp:
        case Op::Sin:
        case Op::Cos:
        case Op::Arctan: return domain_of(e.child(), w, tol);
        case Op::Add:
        case Op::Sub:
        case Op::Mul: return intersect_or_empty(domain_of(e.lhs(), w, tol), domain_of(e.rhs(), w, tol));
        case Op::Div: {
            DomainSet d = intersect_or_empty(domain_of(e.lhs(), w, tol), domain_of(e.rhs(), w, tol));
            return select(e.rhs(), d, Keep::NonZero, tol);
        }
        case Op::Ln: {
            const Expr& u = e.child();
            if (u.op() == Op::Abs) return select(u.child(), domain_of(u.child(), w, tol), Keep::NonZero, tol);
            return select(u, domain_of(u, w, tol), Keep::Positive, tol);
        }
        case Op::Sqrt: return select(e.child(), domain_of(e.child(), w, tol), Keep::NonNegative, tol);
        case Op::Pow: {
            const Rational& n = e.exponent();
            DomainSet d = domain_of(e.child(), w, tol);
            if (n.is_integer()) return n.is_negative() ? select(e.child(), d, Keep::NonZero, tol) : d;
            return select(e.child(), d, n.is_negative() ? Keep::Positive : Keep::NonNegative, tol);
        }
        case Op::Tan:
        case Op::Sec: {
            const Expr& u = e.child();
            return select(cos(u), domain_of(u, w, tol), Keep::NonZero, tol);
        }
        case Op::Arcsin: {
            const Expr& u = e.child();
            DomainSet d = domain_of(u, w, tol);
            DomainSet upper = select(num(1) - u, d, Keep::NonNegative, tol);
            return select(u + num(1), upper, Keep::NonNegative, tol);
        }
    }
    return DomainSet(w);
}

}  // namespace

DomainSet natural_domain(const Expr& e, const Window& window, const Tolerances& tol) {
    make_window(window.lo, window.hi);
    DomainSet d = domain_of(e, window, tol);
    if (d.empty())
        throw Error(ErrorCode::EmptyDomain,
                    format_expr(e) + " is undefined everywhere in the window " + window.to_string());
    return d;
}

}  // namespace primcalc
