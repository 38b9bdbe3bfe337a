// SPDX-License-Identifier: Apache-2.0
#include "primcalc/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace primcalc {

// ---------------------------------------------------------------------------
// Symbolic derivative

namespace {

Expr chain(const Expr& outer, const Expr& du) {
    if (du.is_one()) return outer;
    return outer * du;
}

Expr derive(const Expr& e) {
    switch (e.op()) {
        case Op::Const: return num(0);
        case Op::Var: return num(1);
        case Op::Neg: return -derive(e.child());
        case Op::Add: return derive(e.lhs()) + derive(e.rhs());
        case Op::Sub: return derive(e.lhs()) - derive(e.rhs());
        case Op::Mul: {
            const Expr& a = e.lhs();
            const Expr& b = e.rhs();
            if (!contains_var(a)) return a * derive(b);
            if (!contains_var(b)) return derive(a) * b;
            return chain(b, derive(a)) + a * derive(b);
        }
        case Op::Div: {
            const Expr& a = e.lhs();
            const Expr& b = e.rhs();
            if (!contains_var(b)) return derive(a) / b;
            if (!contains_var(a)) return -(a * derive(b)) / pow(b, Rational(2));
            return (chain(b, derive(a)) - a * derive(b)) / pow(b, Rational(2));
        }
        case Op::Pow: {
            const Expr& u = e.child();
            const Rational& n = e.exponent();
            Rational m = n - Rational(1);
            Expr outer = m.is_zero() ? num(n) : num(n) * pow(u, m);
            return chain(outer, derive(u));
        }
        case Op::Abs: {
            const Expr& u = e.child();
            return chain(u / abs(u), derive(u));
        }
        case Op::Sqrt: {
            const Expr& u = e.child();
            return derive(u) / (num(2) * sqrt(u));
        }
        case Op::Exp: return chain(e, derive(e.child()));
        case Op::Ln: {
            const Expr& u = e.child().op() == Op::Abs ? e.child().child() : e.child();
            return derive(u) / u;
        }
        case Op::Sin: return chain(cos(e.child()), derive(e.child()));
        case Op::Cos: return chain(-sin(e.child()), derive(e.child()));
        case Op::Tan: return chain(pow(sec(e.child()), Rational(2)), derive(e.child()));
        case Op::Sec: return chain(sec(e.child()) * tan(e.child()), derive(e.child()));
        case Op::Arcsin: {
            const Expr& u = e.child();
            return derive(u) / sqrt(num(1) - pow(u, Rational(2)));
        }
        case Op::Arctan: {
            const Expr& u = e.child();
            return derive(u) / (num(1) + pow(u, Rational(2)));
        }
    }
    throw Error(ErrorCode::InvalidArgument, "cannot differentiate this node");
}

}  // namespace

Expr differentiate(const Expr& e) { return simplify_basic(derive(e)); }

double numeric_derivative(const Expr& e, double x) {
    double h = 1e-5 * std::max(1.0, std::abs(x));
    auto probe = [&](double at) {
        auto v = eval_at(e, at);
        if (!v)
            throw Error(ErrorCode::UndefinedNear,
                        "derivative probe at " + Real::from_double(at).to_string() + " is outside the domain");
        return *v;
    };
    auto central = [&](double step) { return (probe(x + step) - probe(x - step)) / (2.0 * step); };
    double d1 = central(h);
    double d2 = central(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

struct SimpsonState {
    const Expr& e;
    std::size_t budget;
    bool exhausted = false;
};

double value_at(const Expr& e, double x) {
    auto v = eval_at(e, x);
    if (!v)
        throw Error(ErrorCode::DomainViolation,
                    format_expr(e) + " is undefined at " + Real::from_double(x).to_string() + " inside the range");
    return *v;
}

double simpson(SimpsonState& st, double a, double fa, double m, double fm, double b, double fb, double whole,
               double eps) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = value_at(st.e, lm);
    double frm = value_at(st.e, rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    bool tiny = (b - a) <= 1e-13 * std::max(1.0, std::abs(a));
    if (std::abs(delta) <= 15.0 * eps || tiny) return left + right + delta / 15.0;
    if (st.budget == 0) {
        st.exhausted = true;
        return left + right + delta / 15.0;
    }
    --st.budget;
    double half = std::max(eps / 2.0, 1e-15);
    return simpson(st, a, fa, lm, flm, m, fm, left, half) + simpson(st, m, fm, rm, frm, b, fb, right, half);
}

}  // namespace

double quadrature(const Expr& e, const Real& a, const Real& b, const Tolerances& tol) {
    if (!a.is_finite() || !b.is_finite())
        throw Error(ErrorCode::InvalidArgument, "improper integrals are not supported");
    bool flipped = less(b, a);
    const Real& lo = flipped ? b : a;
    const Real& hi = flipped ? a : b;
    if (equal(lo, hi)) return 0.0;
    Window w{lo - Real::integer(1), hi + Real::integer(1)};
    DomainSet d = natural_domain(e, w, tol);
    bool inside = std::any_of(d.parts().begin(), d.parts().end(),
                              [&](const Interval& p) { return p.contains(lo) && p.contains(hi); });
    if (!inside)
        throw Error(ErrorCode::DomainViolation, "[" + lo.to_string() + "," + hi.to_string() +
                                                    "] is not inside one interval of the domain " + d.to_string());
    SimpsonState st{e, tol.max_subdivisions};
    constexpr int panels = 16;
    double x0 = lo.value();
    double x1 = hi.value();
    double step = (x1 - x0) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        double pa = x0 + step * i;
        double pb = i + 1 == panels ? x1 : x0 + step * (i + 1);
        double pm = 0.5 * (pa + pb);
        double fa = value_at(e, pa);
        double fm = value_at(e, pm);
        double fb = value_at(e, pb);
        double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson(st, pa, fa, pm, fm, pb, fb, whole, tol.quadrature / panels);
    }
    if (flipped) total = -total;
    if (st.exhausted)
        throw ToleranceError("quadrature did not reach tolerance within " + std::to_string(tol.max_subdivisions) +
                                 " subdivisions",
                             total);
    return total;
}

// ---------------------------------------------------------------------------
// Zero isolation

namespace {

constexpr int kMaxCriticalDepth = 2;
constexpr double kSampleZero = 1e-13;

struct Scan {
    const Tolerances& tol;
    double w_lo;
    double h;
};

double bisect(const Expr& u, double a, double va, double b, const Scan& sc) {
    for (int i = 0; i < 200 && (b - a) > sc.tol.bisection; ++i) {
        double m = 0.5 * (a + b);
        auto vm = eval_at(u, m);
        if (!vm) break;
        if (*vm == 0.0) return m;
        if ((*vm > 0) == (va > 0)) {
            a = m;
            va = *vm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Roots of u on one interval where u is continuous. Critical points of u
/// (roots of u') join the sample grid, so between neighbouring samples u is
/// monotone whenever the derivative was resolved.
std::vector<double> roots_in(const Expr& u, const Interval& c, const Scan& sc, int depth) {
    double a = c.lo.value();
    double b = c.hi.value();
    std::vector<double> xs;
    if (c.lo_closed) xs.push_back(a);
    double k0 = std::floor((a - sc.w_lo) / sc.h) + 1.0;
    for (double k = k0;; k += 1.0) {
        double x = sc.w_lo + k * sc.h;
        if (x >= b) break;
        if (x > a) xs.push_back(x);
    }
    if (c.hi_closed) xs.push_back(b);

    std::vector<double> critical;
    if (depth < kMaxCriticalDepth) {
        Expr du = differentiate(u);
        if (contains_var(du)) critical = roots_in(du, c, sc, depth + 1);
        for (double x : critical)
            if (x > a && x < b) xs.push_back(x);
        std::sort(xs.begin(), xs.end());
    }

    std::vector<double> roots;
    std::optional<std::pair<double, double>> last;  // last nonzero sample
    bool zero_since_last = false;
    for (double x : xs) {
        auto v = eval_at(u, x);
        if (!v) {
            last.reset();
            zero_since_last = false;
            continue;
        }
        if (std::abs(*v) <= kSampleZero) {
            roots.push_back(x);
            zero_since_last = true;
            continue;
        }
        if (last && !zero_since_last && ((last->second > 0) != (*v > 0)))
            roots.push_back(bisect(u, last->first, last->second, x, sc));
        last = std::make_pair(x, *v);
        zero_since_last = false;
    }
    for (double x : critical) {
        if (x < a || x > b || !c.contains(x)) continue;
        auto v = eval_at(u, x);
        if (v && std::abs(*v) < sc.tol.tangential) roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double p, double q) { return std::abs(p - q) <= 1e-9 * std::max(1.0, std::abs(p)); }),
                roots.end());
    return roots;
}

std::vector<Real> numeric_zeros(const Expr& u, const DomainSet& d, const Tolerances& tol) {
    Scan sc{tol, d.window().lo.value(), d.window().length() / static_cast<double>(tol.scan_divisions)};
    SnapOptions snap_opts{tol.snap, 12, 64};
    std::vector<Real> out;
    for (const Interval& c : d.parts()) {
        std::vector<double> roots = roots_in(u, c, sc, 0);
        for (std::size_t i = 1; i < roots.size(); ++i) {
            if (roots[i] - roots[i - 1] < 4.0 * sc.h)
                throw Error(ErrorCode::ResolutionFailure,
                            "zeros of " + format_expr(u) + " near " + Real::from_double(roots[i]).to_string() +
                                " are closer than the scan resolution allows");
        }
        for (double r : roots) out.push_back(snap(r, snap_opts));
    }
    return out;
}

std::vector<Real> zeros_raw(const Expr& u, const DomainSet& d, const Tolerances& tol) {
    if (!contains_var(u)) {
        auto v = eval_at(u, 0.0);
        if (v && *v == 0.0)
            throw Error(ErrorCode::InvalidArgument, format_expr(u) + " is identically zero");
        return {};
    }
    switch (u.op()) {
        case Op::Neg:
        case Op::Abs:
        case Op::Sqrt: return zeros_raw(u.child(), d, tol);
        case Op::Exp: return {};
        case Op::Pow:
            if (u.exponent().is_negative()) return {};
            return zeros_raw(u.child(), d, tol);
        case Op::Div: return zeros_raw(u.lhs(), d, tol);
        case Op::Mul: {
            const Expr& a = u.lhs();
            const Expr& b = u.rhs();
            if (!contains_var(a)) return zeros_raw(a.is_zero() ? a : b, d, tol);
            if (!contains_var(b)) return zeros_raw(b.is_zero() ? b : a, d, tol);
            std::vector<Real> za = zeros_raw(a, d, tol);
            std::vector<Real> zb = zeros_raw(b, d, tol);
            za.insert(za.end(), zb.begin(), zb.end());
            return za;
        }
        default: return numeric_zeros(u, d, tol);
    }
}

}  // namespace

std::vector<Real> zeros_on(const Expr& e, const DomainSet& d, const Tolerances& tol) {
    std::vector<Real> z = zeros_raw(e, d, tol);
    std::vector<Real> out;
    for (const Real& x : z)
        if (d.contains(x)) out.push_back(x);
    std::sort(out.begin(), out.end(), [](const Real& a, const Real& b) { return less(a, b); });
    out.erase(std::unique(out.begin(), out.end(), [](const Real& a, const Real& b) { return equal(a, b); }),
              out.end());
    return out;
}

std::vector<Real> find_zeros(const Expr& e, const Window& window, const Tolerances& tol) {
    DomainSet d = natural_domain(e, window, tol);
    return zeros_on(e, d, tol);
}

std::string_view to_string(Sign s) {
    switch (s) {
        case Sign::Negative: return "-";
        case Sign::Zero: return "0";
        case Sign::Positive: return "+";
        case Sign::Undefined: return "undefined";
    }
    return "?";
}

SignChart sign_chart(const Expr& e, const Window& window, const Tolerances& tol) {
    SignChart chart;
    std::optional<DomainSet> d;
    try {
        d = natural_domain(e, window, tol);
    } catch (const Error& err) {
        if (err.code() != ErrorCode::EmptyDomain) throw;
    }
    if (!d) {
        chart.signs.push_back(Sign::Undefined);
        return chart;
    }
    std::vector<Real> points = zeros_on(e, *d, tol);
    for (const Interval& p : d->parts()) {
        for (const Real* x : {&p.lo, &p.hi})
            if (less(window.lo, *x) && less(*x, window.hi)) points.push_back(*x);
    }
    std::sort(points.begin(), points.end(), [](const Real& a, const Real& b) { return less(a, b); });
    points.erase(std::unique(points.begin(), points.end(), [](const Real& a, const Real& b) { return equal(a, b); }),
                 points.end());
    chart.breakpoints = points;
    std::vector<Real> edges{window.lo};
    edges.insert(edges.end(), points.begin(), points.end());
    edges.push_back(window.hi);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i].value();
        double b = edges[i + 1].value();
        Sign s = Sign::Undefined;
        for (double f : {0.5, 0.3, 0.7}) {
            double x = a + f * (b - a);
            if (!d->contains(x)) continue;
            auto v = eval_at(e, x);
            if (!v) continue;
            s = *v > 0 ? Sign::Positive : (*v < 0 ? Sign::Negative : Sign::Zero);
            break;
        }
        chart.signs.push_back(s);
    }
    return chart;
}

std::string_view to_string(Continuity c) {
    switch (c) {
        case Continuity::Continuous: return "continuous";
        case Continuity::C1: return "c1";
        case Continuity::Unknown: return "unknown";
    }
    return "unknown";
}

Continuity continuity_class(const Expr& e, const DomainSet& d, const Tolerances& tol) {
    DomainSet own(d.window());
    try {
        own = natural_domain(e, d.window(), tol);
    } catch (const Error& err) {
        if (err.code() != ErrorCode::EmptyDomain) throw;
        return Continuity::Unknown;
    }
    if (!is_subset(d, own)) return Continuity::Unknown;
    Expr de = differentiate(e);
    try {
        DomainSet dd = natural_domain(de, d.window(), tol);
        if (is_subset(d, dd)) return Continuity::C1;
    } catch (const Error& err) {
        if (err.code() != ErrorCode::EmptyDomain) throw;
    }
    return Continuity::Continuous;
}

namespace {

bool tiny_step(double d, double v) { return std::abs(d) <= 1e-15 * std::max(1.0, std::abs(v)); }

/// Differences of probes at t, t/10, t/100 shrinking tenfold mean the error
/// is a power series in t; two Richardson levels remove it.
std::optional<double> richardson(const double (&v)[3]) {
    double d1 = v[1] - v[0];
    double d2 = v[2] - v[1];
    if (tiny_step(d2, v[2])) return v[2];
    if (d1 == 0.0) return std::nullopt;
    double ratio = d2 / d1;
    if (ratio <= 0.07 || ratio >= 0.14) return std::nullopt;
    double r1 = (10.0 * v[1] - v[0]) / 9.0;
    double r2 = (10.0 * v[2] - v[1]) / 9.0;
    return (100.0 * r2 - r1) / 99.0;
}

double aitken(const double (&v)[3]) {
    double d1 = v[1] - v[0];
    double d2 = v[2] - v[1];
    double denom = d2 - d1;
    if (tiny_step(denom, v[2])) return v[2];
    return v[2] - d2 * d2 / denom;
}

/// Extrapolates sample(t) to t -> 0+. Analytic behaviour is handled with
/// Richardson on moderate steps (small steps lose digits next to points such
/// as pi that are not representable); anything else, typically a square-root
/// endpoint, falls back to Aitken on smaller steps.
template <class F>
std::optional<double> extrapolate(F&& sample) {
    auto probe = [&](double t0, double (&v)[3]) {
        double t = t0;
        for (double& out : v) {
            auto s = sample(t);
            if (!s) return false;
            out = *s;
            t /= 10.0;
        }
        return true;
    };
    double v[3];
    if (!probe(1e-2, v)) return std::nullopt;
    if (auto r = richardson(v)) return r;
    if (!probe(1e-4, v)) return std::nullopt;
    return aitken(v);
}

}  // namespace

std::optional<double> one_sided_limit(const Expr& e, double p, int side) {
    return extrapolate([&](double t) { return eval_at(e, p + side * t); });
}

std::optional<double> one_sided_derivative(const Expr& e, double p, double fp, int side) {
    return extrapolate(
        [&](double t) -> std::optional<double> {
            auto v = eval_at(e, p + side * t);
            if (!v) return std::nullopt;
            return (*v - fp) / (side * t);
        });
}

}  // namespace primcalc
