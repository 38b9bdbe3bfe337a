// SPDX-License-Identifier: Apache-2.0
#include "primcalc/primitives.hpp"

#include <algorithm>
#include <cmath>

#include "primcalc/error.hpp"

namespace primcalc {

namespace {

constexpr std::size_t kDerivativeSamples = 64;
constexpr std::size_t kConstantSamples = 32;

bool near_point(double x, double p) { return std::abs(x - p) <= 1e-12 * std::max(1.0, std::abs(p)); }

std::string fmt(double v) { return Real::from_double(v).to_string(); }

/// Interior sample grid of a component, keeping clear of its ends and of the
/// given points.
std::vector<double> samples(const Interval& c, std::size_t n, const std::vector<Plug>& avoid, double edge) {
    double a = c.lo.value();
    double b = c.hi.value();
    double margin = std::max(edge, 1e-9 * (b - a));
    std::vector<double> xs;
    for (std::size_t j = 0; j < n; ++j) {
        double x = a + (static_cast<double>(j) + 0.5) / static_cast<double>(n) * (b - a);
        if (x - a < margin || b - x < margin) continue;
        bool clash = std::any_of(avoid.begin(), avoid.end(),
                                 [&](const Plug& p) { return std::abs(x - p.point.value()) < margin; });
        if (!clash) xs.push_back(x);
    }
    return xs;
}

DomainSet as_set(const Interval& c, const Window& w) { return DomainSet::from_parts({c}, w); }

void check_domain(const std::vector<Expr>& rules, const DomainSet& domain, const std::vector<Plug>& plugs,
                  const Tolerances& tol) {
    StandardCheck sc = is_standard(domain);
    if (!sc.standard)
        throw Error(ErrorCode::InvalidArgument,
                    "domain " + domain.to_string() + " is not standard: " + sc.violations.front().detail);
    if (domain.empty()) throw Error(ErrorCode::EmptyDomain, "a function needs a non-empty domain");
    if (rules.size() != 1 && rules.size() != domain.parts().size())
        throw Error(ErrorCode::ArityMismatch, "expected one rule or one rule per component");
    std::vector<Real> points;
    for (const Plug& p : plugs) {
        if (!domain.contains(p.point))
            throw Error(ErrorCode::DomainViolation, "plug point " + p.point.to_string() + " is outside the domain");
        points.push_back(p.point);
    }
    for (std::size_t i = 0; i < domain.parts().size(); ++i) {
        const Expr& r = rules.size() == 1 ? rules[0] : rules[i];
        DomainSet part = as_set(domain.parts()[i], domain.window());
        DomainSet own(domain.window());
        try {
            own = natural_domain(r, domain.window(), tol);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyDomain) throw;
        }
        if (auto w = subset_witness(part, own, points))
            throw Error(ErrorCode::DomainViolation,
                        format_expr(r) + " is undefined at " + w->to_string() + ", which is in the domain");
    }
}

}  // namespace

Fn Fn::make(Expr rule, DomainSet domain, std::vector<Plug> plugs, const Tolerances& tol) {
    std::vector<Expr> rules{std::move(rule)};
    check_domain(rules, domain, plugs, tol);
    return Fn(std::move(rules), std::move(domain), std::move(plugs));
}

Fn Fn::natural(Expr rule, const Window& window, const Tolerances& tol) {
    DomainSet d = natural_domain(rule, window, tol);
    return Fn({std::move(rule)}, std::move(d), {});
}

Fn Fn::piecewise(std::vector<Expr> rules, DomainSet domain, std::vector<Plug> plugs, const Tolerances& tol) {
    check_domain(rules, domain, plugs, tol);
    return Fn(std::move(rules), std::move(domain), std::move(plugs));
}

Fn Fn::unchecked(std::vector<Expr> rules, DomainSet domain, std::vector<Plug> plugs) {
    if (rules.empty()) throw Error(ErrorCode::ArityMismatch, "a function needs a rule");
    return Fn(std::move(rules), std::move(domain), std::move(plugs));
}

const Expr& Fn::rule(std::size_t component) const {
    if (rules_.size() == 1) return rules_[0];
    if (component >= rules_.size()) throw Error(ErrorCode::ArityMismatch, "no such component");
    return rules_[component];
}

const Expr& Fn::rule_at(double x) const {
    if (rules_.size() == 1) return rules_[0];
    auto i = domain_.component_of(x);
    if (!i) throw Error(ErrorCode::DomainViolation, fmt(x) + " is outside " + domain_.to_string());
    return rules_[*i];
}

const Plug* Fn::plug_at(double x) const {
    for (const Plug& p : plugs_)
        if (near_point(x, p.point.value())) return &p;
    return nullptr;
}

std::optional<double> Fn::operator()(double x) const {
    if (!domain_.contains(x)) return std::nullopt;
    if (const Plug* p = plug_at(x)) return p->value.value();
    return eval_at(rule_at(x), x);
}

std::string Fn::to_string() const {
    if (rules_.size() == 1 && plugs_.empty()) return format_expr(rules_[0]);
    std::string s;
    const auto& parts = domain_.parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += "; ";
        s += format_expr(rule(i)) + " if x in " + parts[i].to_string();
    }
    for (const Plug& p : plugs_) s += "; " + p.value.to_string() + " if x = " + p.point.to_string();
    return s;
}

std::string PrimitiveFamily::to_string() const {
    const auto& parts = base_.domain().parts();
    if (parts.size() == 1 && base_.plugs().empty()) return format_expr(base_.rule(0)) + " + c";
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += "; ";
        s += format_expr(base_.rule(i)) + " + c" + std::to_string(i + 1) + " if x in " + parts[i].to_string();
    }
    for (const Plug& p : base_.plugs()) {
        auto i = base_.domain().component_of(p.point.value());
        std::string c = "c" + std::to_string(i ? *i + 1 : 0);
        std::string v = p.value.value() == 0.0 ? c : p.value.to_string() + " + " + c;
        s += "; " + v + " if x = " + p.point.to_string();
    }
    return s;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

EvidenceLevel endpoint_level(const DomainSet& d) {
    for (const Interval& p : d.parts())
        if (!p.lo.is_exact() || !p.hi.is_exact()) return EvidenceLevel::Numeric;
    return EvidenceLevel::Symbolic;
}

/// Compares the derivative of F with f on every component, and at the plugs
/// and closed endpoints of F. `g_is_derivative` means f is itself compared
/// against F' directly (is_primitive); otherwise the derivatives of both are
/// compared (equivalent).
void derivative_battery(const Fn& F, const Fn& f, bool g_is_derivative, CheckReport& rep, const Tolerances& tol) {
    const auto& parts = f.domain().parts();
    for (std::size_t i = 0; i < parts.size() && rep.passed(); ++i) {
        const Interval& c = parts[i];
        Expr dF = differentiate(F.rule(i));
        Expr target = g_is_derivative ? simplify_basic(f.rule(i)) : differentiate(f.rule(i));
        std::string hyp = g_is_derivative ? "F' = f on " + c.to_string() : "f' = g' on " + c.to_string();
        if (dF == target) {
            rep.add({hyp, EvidenceLevel::Symbolic, true, "derivative is AST-equal to " + format_expr(target)});
        } else {
            std::vector<Plug> avoid = F.plugs();
            avoid.insert(avoid.end(), f.plugs().begin(), f.plugs().end());
            std::size_t checked = 0;
            for (double x : samples(c, kDerivativeSamples, avoid, tol.edge)) {
                auto d = eval_at(dF, x);
                auto v = eval_at(target, x);
                if (!v) continue;
                if (!d) {
                    rep.add({hyp, EvidenceLevel::Numeric, false, "derivative undefined at " + fmt(x)});
                    rep.fail(Reason::NotDifferentiable, format_expr(F.rule(i)) + " is not differentiable at " + fmt(x));
                    rep.witness = Real::from_double(x);
                    return;
                }
                if (std::abs(*d - *v) > tol.derivative * (1.0 + std::abs(*v))) {
                    rep.add({hyp, EvidenceLevel::Numeric, false,
                             "at " + fmt(x) + " derivative is " + fmt(*d) + ", expected " + fmt(*v)});
                    rep.fail(Reason::DerivativeMismatch, "derivatives differ at " + fmt(x));
                    rep.witness = Real::from_double(x);
                    return;
                }
                ++checked;
            }
            rep.add({hyp, EvidenceLevel::Numeric, true,
                     std::to_string(checked) + " sample points agree within " + fmt(tol.derivative)});
        }

        // Closed endpoints where the symbolic derivative is not defined: the
        // derivative there is one-sided.
        if (!g_is_derivative) continue;
        for (int end = 0; end < 2; ++end) {
            bool closed = end == 0 ? c.lo_closed : c.hi_closed;
            if (!closed) continue;
            const Real& at = end == 0 ? c.lo : c.hi;
            double p = at.value();
            auto dp = eval_at(dF, p);
            if (dp && dF == target) continue;
            auto Fp = F(p);
            auto fp = f(p);
            std::string h = "one-sided F'(" + at.to_string() + ") = f(" + at.to_string() + ")";
            std::optional<double> d = dp;
            if (!d && Fp) d = one_sided_derivative(F.rule(i), p, *Fp, end == 0 ? 1 : -1);
            if (!d || !fp) {
                rep.add({h, EvidenceLevel::Numeric, false, "no one-sided derivative"});
                rep.fail(Reason::NotDifferentiable, "F has no one-sided derivative at " + at.to_string());
                rep.witness = at;
                return;
            }
            bool ok = std::abs(*d - *fp) <= tol.one_sided * (1.0 + std::abs(*fp));
            rep.add({h, EvidenceLevel::Numeric, ok, "derivative " + fmt(*d) + ", f = " + fmt(*fp)});
            if (!ok) {
                rep.fail(Reason::DerivativeMismatch, "one-sided derivative mismatch at " + at.to_string());
                rep.witness = at;
                return;
            }
        }
    }
    if (!rep.passed() || !g_is_derivative) return;

    for (const Plug& plug : F.plugs()) {
        double p = plug.point.value();
        double v = plug.value.value();
        const Expr& r = F.rule_at(p);
        std::string at = plug.point.to_string();
        auto left = one_sided_limit(r, p, -1);
        auto right = one_sided_limit(r, p, +1);
        bool cont = left && right && std::abs(*left - v) <= tol.limit && std::abs(*right - v) <= tol.limit;
        rep.add({"F continuous at plug " + at, EvidenceLevel::Numeric, cont,
                 "limits " + (left ? fmt(*left) : "undefined") + " and " + (right ? fmt(*right) : "undefined") +
                     ", plug value " + plug.value.to_string()});
        if (!cont) {
            rep.fail(Reason::NotDifferentiable, "F is not continuous at " + at);
            rep.witness = plug.point;
            return;
        }
        auto fp = f(p);
        auto dl = one_sided_derivative(r, p, v, -1);
        auto dr = one_sided_derivative(r, p, v, +1);
        bool ok = fp && dl && dr && std::abs(*dl - *fp) <= tol.one_sided * (1.0 + std::abs(*fp)) &&
                  std::abs(*dr - *fp) <= tol.one_sided * (1.0 + std::abs(*fp));
        rep.add({"one-sided F'(" + at + ") = f(" + at + ")", EvidenceLevel::Numeric, ok,
                 "left " + (dl ? fmt(*dl) : "undefined") + ", right " + (dr ? fmt(*dr) : "undefined") + ", f = " +
                     (fp ? fmt(*fp) : "undefined")});
        if (!ok) {
            rep.fail(Reason::DerivativeMismatch, "one-sided derivatives at " + at + " do not match f");
            rep.witness = plug.point;
            return;
        }
    }
}

bool check_domains(const Fn& a, const Fn& b, const char* hyp, CheckReport& rep) {
    DomainComparison cmp = domains_equal(a.domain(), b.domain());
    rep.add({hyp, endpoint_level(a.domain()), cmp.equal, cmp.equal ? a.domain().to_string() : cmp.detail});
    if (!cmp.equal) {
        rep.fail(Reason::DomainMismatch, std::string("domains differ: ") + a.domain().to_string() + " vs " +
                                             b.domain().to_string() + "; " + cmp.detail);
        rep.witness = cmp.witness;
    }
    return cmp.equal;
}

}  // namespace

CheckReport is_primitive(const Fn& F, const Fn& f, const Tolerances& tol) {
    CheckReport rep;
    if (!check_domains(F, f, "D_F = D_f", rep)) return rep;
    derivative_battery(F, f, true, rep, tol);
    if (rep.passed()) rep.message = "F is a primitive of f on " + f.domain().to_string();
    return rep;
}

CheckReport equivalent(const Fn& f, const Fn& g, const Tolerances& tol) {
    CheckReport rep;
    if (!check_domains(f, g, "D_f = D_g", rep)) return rep;
    derivative_battery(f, g, false, rep, tol);
    if (rep.passed()) rep.message = "f ~ g";
    return rep;
}

PrimitiveFamily family_from_base(const Fn& F, const Fn& f, const Tolerances& tol) {
    CheckReport rep = is_primitive(F, f, tol);
    if (!rep.passed())
        throw Error(ErrorCode::NotAPrimitive, F.to_string() + " is not a primitive of " + f.to_string() + ": " +
                                                  rep.message,
                    rep);
    return PrimitiveFamily(F, f);
}

Fn member(const PrimitiveFamily& fam, const std::vector<Real>& constants) {
    const Fn& base = fam.base();
    const auto& parts = base.domain().parts();
    if (constants.size() != parts.size())
        throw Error(ErrorCode::ArityMismatch, "family has " + std::to_string(parts.size()) + " constants, got " +
                                                  std::to_string(constants.size()));
    bool all_zero = std::all_of(constants.begin(), constants.end(), [](const Real& c) { return c.value() == 0.0; });
    if (all_zero) return base;
    std::vector<Expr> rules;
    for (std::size_t i = 0; i < parts.size(); ++i)
        rules.push_back(simplify_basic(base.rule(i) + to_expr(constants[i])));
    bool same = std::all_of(rules.begin(), rules.end(), [&](const Expr& r) { return r == rules.front(); });
    if (same) rules.resize(1);
    std::vector<Plug> plugs;
    for (const Plug& p : base.plugs()) {
        auto i = base.domain().component_of(p.point.value());
        plugs.push_back({p.point, p.value + constants[i.value_or(0)]});
    }
    return Fn::unchecked(std::move(rules), base.domain(), std::move(plugs));
}

Containment contains(const PrimitiveFamily& fam, const Fn& phi, const Tolerances& tol) {
    Containment out;
    CheckReport& rep = out.report;
    const Fn& base = fam.base();
    if (!check_domains(phi, base, "D_phi = D_F", rep)) return out;
    std::vector<Plug> avoid = base.plugs();
    avoid.insert(avoid.end(), phi.plugs().begin(), phi.plugs().end());
    const auto& parts = base.domain().parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        double lo = 0, hi = 0, sum = 0;
        double x_lo = 0, x_hi = 0;
        std::size_t n = 0;
        for (double x : samples(parts[i], kConstantSamples, avoid, tol.edge)) {
            auto a = phi(x);
            auto b = base(x);
            if (!a || !b) continue;
            double d = *a - *b;
            if (n == 0 || d < lo) { lo = d; x_lo = x; }
            if (n == 0 || d > hi) { hi = d; x_hi = x; }
            sum += d;
            ++n;
        }
        double mean = n ? sum / static_cast<double>(n) : 0.0;
        std::string hyp = "phi - F constant on " + parts[i].to_string();
        if (n == 0 || hi - lo > tol.constant_recovery * (1.0 + std::abs(mean))) {
            rep.add({hyp, EvidenceLevel::Numeric, false,
                     n ? "difference ranges over [" + fmt(lo) + ", " + fmt(hi) + "]" : "no usable samples"});
            rep.fail(Reason::NonConstantDifference, "phi - F is not constant on " + parts[i].to_string());
            rep.witness = Real::from_double(x_lo);
            rep.witness2 = Real::from_double(x_hi);
            out.constants.clear();
            return out;
        }
        rep.add({hyp, EvidenceLevel::Numeric, true, "constant " + fmt(mean) + " over " + std::to_string(n) + " samples"});
        out.constants.push_back(snap(mean));
    }
    for (const Plug& p : avoid) {
        double x = p.point.value();
        auto a = phi(x);
        auto b = base(x);
        auto i = base.domain().component_of(x);
        if (!a || !b || !i) continue;
        double c = out.constants[*i].value();
        bool ok = std::abs(*a - *b - c) <= tol.constant_recovery * (1.0 + std::abs(c));
        rep.add({"phi - F at " + p.point.to_string(), EvidenceLevel::Numeric, ok, "difference " + fmt(*a - *b)});
        if (!ok) {
            rep.fail(Reason::NonConstantDifference, "phi - F jumps at " + p.point.to_string());
            rep.witness = p.point;
            out.constants.clear();
            return out;
        }
    }
    rep.message = "phi is in the family";
    return out;
}

Fn combine(const Fn& a, const Fn& b, Op op, const Tolerances& tol) {
    (void)tol;
    DomainSet d = intersect(a.domain(), b.domain());
    std::vector<Expr> rules;
    for (const Interval& c : d.parts()) {
        double mid = midpoint(c.lo, c.hi).value();
        Expr ra = a.rule_at(mid);
        Expr rb = b.rule_at(mid);
        rules.push_back(simplify_basic(Expr::make_binary(op, ra, rb)));
    }
    bool same = std::all_of(rules.begin(), rules.end(), [&](const Expr& r) { return r == rules.front(); });
    if (same) rules.resize(1);
    std::vector<Plug> plugs;
    auto add_plug = [&](const Real& p) {
        if (!d.contains(p)) return;
        for (const Plug& q : plugs)
            if (equal(q.point, p)) return;
        auto va = a(p.value());
        auto vb = b(p.value());
        if (!va || !vb) return;
        double v = op == Op::Add ? *va + *vb : op == Op::Sub ? *va - *vb : *va * *vb;
        plugs.push_back({p, snap(v)});
    };
    for (const Plug& p : a.plugs()) add_plug(p.point);
    for (const Plug& p : b.plugs()) add_plug(p.point);
    return Fn::unchecked(std::move(rules), std::move(d), std::move(plugs));
}

Fn scale(const Real& alpha, const Fn& f) {
    Expr k = to_expr(alpha);
    std::vector<Expr> rules;
    for (const Expr& r : f.rules()) rules.push_back(simplify_basic(k * r));
    std::vector<Plug> plugs;
    for (const Plug& p : f.plugs()) plugs.push_back({p.point, snap(alpha.value() * p.value.value())});
    return Fn::unchecked(std::move(rules), f.domain(), std::move(plugs));
}

PrimitiveFamily class_add(const PrimitiveFamily& a, const PrimitiveFamily& b, const Tolerances& tol) {
    return family_from_base(combine(a.base(), b.base(), Op::Add, tol), combine(a.target(), b.target(), Op::Add, tol),
                            tol);
}

PrimitiveFamily class_sub(const PrimitiveFamily& a, const PrimitiveFamily& b, const Tolerances& tol) {
    return family_from_base(combine(a.base(), b.base(), Op::Sub, tol), combine(a.target(), b.target(), Op::Sub, tol),
                            tol);
}

PrimitiveFamily class_scale(const Real& alpha, const PrimitiveFamily& a, const Tolerances& tol) {
    if (alpha.value() == 0.0) throw Error(ErrorCode::ZeroScale, "scaling a class by 0 is not allowed");
    return family_from_base(scale(alpha, a.base()), scale(alpha, a.target()), tol);
}

CheckReport has_primitive(const Fn& f, const Tolerances& tol) {
    CheckReport rep;
    StandardCheck sc = is_standard(f.domain());
    std::string detail = sc.standard ? f.domain().to_string() : sc.violations.front().clause + ": " + sc.violations.front().detail;
    rep.add({"D_f standard", EvidenceLevel::Symbolic, sc.standard, detail});
    if (!sc.standard || f.domain().empty()) {
        rep.fail(Reason::HypothesisUnverified, "domain is not standard");
        if (!sc.violations.empty()) {
            const auto& parts = f.domain().parts();
            std::size_t k = sc.violations.front().part;
            if (k < parts.size()) rep.witness = parts[k].lo;
        }
        return rep;
    }
    const auto& parts = f.domain().parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        DomainSet part = as_set(parts[i], f.window());
        Continuity c = continuity_class(f.rule(i), part, tol);
        bool ok = c != Continuity::Unknown;
        std::vector<Real> plug_points;
        for (const Plug& p : f.plugs()) plug_points.push_back(p.point);
        if (!ok && !plug_points.empty()) {
            // Undefined only at plugs: continuous on each side, the plugs are
            // checked below.
            ok = true;
            DomainSet rest = remove_points(part, plug_points);
            ok = continuity_class(f.rule(i), rest, tol) != Continuity::Unknown;
        }
        rep.add({"f continuous on " + parts[i].to_string(), EvidenceLevel::Symbolic, ok,
                 "class " + std::string(to_string(c))});
        if (!ok) {
            rep.fail(Reason::HypothesisUnverified, "f is not continuous on " + parts[i].to_string());
            rep.witness = parts[i].lo;
            return rep;
        }
    }
    for (const Plug& p : f.plugs()) {
        double x = p.point.value();
        const Expr& r = f.rule_at(x);
        auto l = one_sided_limit(r, x, -1);
        auto h = one_sided_limit(r, x, +1);
        double v = p.value.value();
        bool ok = l && h && std::abs(*l - v) <= tol.limit && std::abs(*h - v) <= tol.limit;
        rep.add({"f continuous at " + p.point.to_string(), EvidenceLevel::Numeric, ok,
                 "limits " + (l ? fmt(*l) : "undefined") + ", " + (h ? fmt(*h) : "undefined") + "; value " +
                     p.value.to_string()});
        if (!ok) {
            rep.fail(Reason::HypothesisUnverified, "f is not continuous at " + p.point.to_string());
            rep.witness = p.point;
            return rep;
        }
    }
    rep.message = "f is continuous on a standard domain, so P(f) is not empty";
    return rep;
}

}  // namespace primcalc
