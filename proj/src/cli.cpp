// SPDX-License-Identifier: Apache-2.0
#include "primcalc/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>

#include "primcalc/calculus.hpp"
#include "primcalc/domain.hpp"
#include "primcalc/expr.hpp"
#include "primcalc/primitives.hpp"
#include "primcalc/rules.hpp"
#include "primcalc/serialize.hpp"

namespace primcalc {

using nlohmann::json;

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Window window_from(const std::vector<std::string>& tokens) {
    if (tokens.empty()) return Window{};
    return make_window(parse_real(tokens[0]), parse_real(tokens[1]));
}

std::string list(const std::vector<Real>& xs) {
    std::string s;
    for (const Real& x : xs) s += (s.empty() ? "" : ", ") + x.to_string();
    return s;
}

}  // namespace

std::vector<CatalogItem> run_catalog(const Tolerances& tol) {
    std::vector<CatalogItem> items;

    {
        // A primitive of 1/x with different constants on the two half-lines
        // is still in P(1/x) but is not ln|x| + c for any single c.
        CatalogItem it;
        it.id = 1;
        it.title = "piecewise primitive of 1/x";
        it.expectation = "contained in P(1/x) with one constant per component";
        Window w = make_window(Real::integer(-5), Real::integer(5));
        Derivation d = antiderive(Fn::natural(parse_expr("1/x"), w, tol));
        Fn phi = Fn::piecewise({parse_expr("ln(-x)-pi"), parse_expr("ln(x)+2")}, d.family.base().domain(), {}, tol);
        Containment c = contains(d.family, phi, tol);
        it.report = c.report;
        it.constants = c.constants;
        it.as_expected = c.report.passed() && c.constants.size() == 2 &&
                         equal(c.constants[0], Real::pi_multiple(Rational(-1))) &&
                         equal(c.constants[1], Real::integer(2));
        it.detail = "phi = " + phi.to_string() + "; constants (" + list(c.constants) + ")";
        items.push_back(std::move(it));
    }
    {
        // The usual textbook answer for 1/(1-cos x+sin x) loses the odd
        // multiples of pi.
        CatalogItem it;
        it.id = 2;
        it.title = "textbook primitive of 1/(1-cos(x)+sin(x))";
        it.expectation = "DomainMismatch at pi";
        Window w = make_window(Real::integer(0), Real::pi_multiple(Rational(4)));
        Fn F = Fn::natural(parse_expr("ln(abs(sin(x)/(1+cos(x)+sin(x))))"), w, tol);
        Fn f = Fn::natural(parse_expr("1/(1-cos(x)+sin(x))"), w, tol);
        it.report = is_primitive(F, f, tol);
        it.as_expected = !it.report.passed() && it.report.reason == Reason::DomainMismatch && it.report.witness &&
                         equal(*it.report.witness, Real::pi_multiple(Rational(1)));
        it.detail = "D_F = " + F.domain().to_string() + "; D_f = " + f.domain().to_string();
        items.push_back(std::move(it));
    }
    {
        // Naive Weierstrass primitive of sqrt(1-cos x): the tangent half
        // angle drops the points where tan(x/2) is undefined.
        CatalogItem it;
        it.id = 3;
        it.title = "naive primitive of sqrt(1-cos(x))";
        it.expectation = "domain strictly smaller than the integrand's (expected fail)";
        Window w = make_window(Real::integer(0), Real::pi_multiple(Rational(4)));
        Fn F = Fn::natural(parse_expr("-2*sqrt(2)/sqrt(1+tan(x/2)^2)"), w, tol);
        Fn f = Fn::natural(parse_expr("sqrt(1-cos(x))"), w, tol);
        it.report = is_primitive(F, f, tol);
        bool smaller = is_subset(F.domain(), f.domain()) && !domains_equal(F.domain(), f.domain()).equal;
        it.as_expected = smaller && !it.report.passed() && it.report.reason == Reason::DomainMismatch &&
                         it.report.witness && equal(*it.report.witness, Real::pi_multiple(Rational(1)));
        it.detail = "D_F = " + F.domain().to_string() + "; D_f = " + f.domain().to_string();
        items.push_back(std::move(it));
    }
    return items;
}

std::vector<CatalogItem> counterexamples(const Tolerances& tol) {
    auto items = run_catalog(tol);
    for (const auto& it : items)
        if (!it.as_expected)
            throw Error(ErrorCode::CatalogBroken,
                        "catalog item " + std::to_string(it.id) + " (" + it.title + ") no longer shows: " +
                            it.expectation,
                        it.report);
    return items;
}

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::Syntax:
        case ErrorCode::UnknownIdentifier:
        case ErrorCode::Overflow:
        case ErrorCode::InvalidArgument:
        case ErrorCode::WindowMismatch: return 2;
        case ErrorCode::HypothesisUnverified:
        case ErrorCode::InverseUnverified:
        case ErrorCode::NotAPrimitive:
        case ErrorCode::CatalogBroken:
        case ErrorCode::CrossCheckMismatch: return 1;
        default: return 3;
    }
}

namespace {

struct Options {
    std::string expr;
    std::string F;
    std::string f;
    std::string g;
    std::string g_inverse;
    std::string mode = "forward";
    std::string a;
    std::string b;
    std::string via_g;
    std::vector<std::string> window;
    std::vector<std::string> g_domain;
    bool json = false;
    bool trace = false;
};

void print_trace(const RuleTrace& t, std::ostream& out) {
    out << "trace:\n";
    for (const TraceStep& s : t.steps) {
        out << "  " << s.rule << " [" << s.theorem << "] -> " << s.result << "\n";
        for (const Evidence& e : s.evidence)
            out << "    " << to_string(e.level) << (e.holds ? "  " : "  FAILED ") << e.hypothesis
                << (e.detail.empty() ? "" : ": " + e.detail) << "\n";
    }
}

void print_report(const CheckReport& r, std::ostream& out) {
    out << "verdict: " << to_string(r.verdict) << "\n";
    if (!r.passed()) {
        out << "reason: " << to_string(r.reason) << "\n";
        if (r.witness) out << "witness: " << r.witness->to_string() << "\n";
        if (r.witness2) out << "witness2: " << r.witness2->to_string() << "\n";
        out << "message: " << r.message << "\n";
    }
}

/// Interval [A,B] of g, each end closed exactly when g is defined there.
DomainSet g_interval(const Expr& g, const std::vector<std::string>& tokens, const Window& w) {
    Real A = parse_real(tokens[0]);
    Real B = parse_real(tokens[1]);
    bool lc = eval_at(g, A.value()).has_value();
    bool hc = eval_at(g, B.value()).has_value();
    return DomainSet::from_parts({Interval::make(A, B, lc, hc)}, w);
}

int cmd_domain(const Options& o, std::ostream& out) {
    DomainSet d = natural_domain(parse_expr(o.expr), window_from(o.window));
    if (o.json)
        out << to_json(d).dump() << "\n";
    else
        out << d.to_string() << "\n";
    return 0;
}

int cmd_check(const Options& o, std::ostream& out) {
    Window w = window_from(o.window);
    Fn F = Fn::natural(parse_expr(o.F), w);
    Fn f = Fn::natural(parse_expr(o.f), w);
    CheckReport r = is_primitive(F, f);
    if (o.json)
        out << to_json(r).dump() << "\n";
    else
        print_report(r, out);
    return r.passed() ? 0 : 1;
}

void print_derivation(const Derivation& d, const Options& o, std::ostream& out) {
    if (o.json) {
        out << json{{"family", to_json(d.family)}, {"trace", to_json(d.trace)}}.dump() << "\n";
        return;
    }
    out << d.family.to_string() << "\n";
    if (o.trace) print_trace(d.trace, out);
}

int cmd_family(const Options& o, std::ostream& out) {
    Derivation d = antiderive(Fn::natural(parse_expr(o.f), window_from(o.window)));
    print_derivation(d, o, out);
    return 0;
}

int cmd_defint(const Options& o, std::ostream& out, std::ostream& err) {
    Window w = window_from(o.window);
    Expr fe = parse_expr(o.f);
    Real a = parse_real(o.a);
    Real b = parse_real(o.b);
    DefiniteResult r;
    if (o.via_g.empty()) {
        r = defint(Fn::natural(fe, w), a, b);
    } else {
        if (o.g_domain.empty()) throw Error(ErrorCode::InvalidArgument, "--via-g needs --g-domain A B");
        Expr ge = parse_expr(o.via_g);
        DomainSet gd = g_interval(ge, o.g_domain, w);
        Real A = parse_real(o.g_domain[0]);
        Real B = parse_real(o.g_domain[1]);
        auto gA = eval_at(ge, A.value());
        auto gB = eval_at(ge, B.value());
        auto near = [](std::optional<double> y, const Real& target) {
            return y && std::abs(*y - target.value()) <= 1e-9 * (1.0 + std::abs(target.value()));
        };
        double sign = 0.0;
        if (near(gA, a) && near(gB, b)) sign = 1.0;
        else if (near(gA, b) && near(gB, a)) sign = -1.0;
        if (sign == 0.0)
            throw Error(ErrorCode::InvalidArgument, "g does not map the ends of --g-domain onto a and b");
        r = defint_change_of_vars(Fn::natural(fe, w), Fn::make(ge, gd), A, B);
        r.value *= sign;
        r.cross_check *= sign;
    }
    if (r.fallback) err << "note: no primitive found; value from quadrature\n";
    if (o.json) {
        out << json{{"value", r.value}, {"cross_check", r.cross_check}, {"fallback", r.fallback},
                    {"trace", to_json(r.trace)}}
                   .dump()
            << "\n";
    } else {
        out << fmt12(r.value) << "\n";
        out << "quadrature: " << fmt12(r.cross_check) << "\n";
        if (o.trace) print_trace(r.trace, out);
    }
    return 0;
}

int cmd_subst(const Options& o, std::ostream& out) {
    Window w = window_from(o.window);
    Expr fe = parse_expr(o.f);
    Expr ge = parse_expr(o.g);
    if (o.mode == "forward") {
        DomainSet gd = o.g_domain.empty() ? natural_domain(ge, w) : g_interval(ge, o.g_domain, w);
        Fn g = Fn::make(ge, gd);
        Fn f = Fn::natural(fe, image_window(g));
        print_derivation(subst_forward(f, g), o, out);
        return 0;
    }
    if (o.g_inverse.empty()) throw Error(ErrorCode::InvalidArgument, "--mode " + o.mode + " needs --g-inverse");
    Expr inv = parse_expr(o.g_inverse);
    Fn f = Fn::natural(fe, w);
    std::optional<DomainSet> gd;
    if (!o.g_domain.empty())
        gd = g_interval(ge, o.g_domain, w);
    else
        gd = preimage(f.domain(), inv, w);
    if (!gd) throw Error(ErrorCode::InvalidArgument, "cannot derive the domain of g; pass --g-domain A B");
    bool relaxed = o.mode == "relaxed";
    Substitution sub{Fn::make(ge, *gd), relaxed ? Direction::InverseRelaxed : Direction::Inverse, inv};
    print_derivation(relaxed ? subst_inverse_relaxed(f, sub) : subst_inverse(f, sub), o, out);
    return 0;
}

int cmd_counterexamples(const Options& o, std::ostream& out) {
    auto items = run_catalog();
    bool broken = false;
    json arr = json::array();
    for (const auto& it : items) {
        broken = broken || !it.as_expected;
        if (o.json) {
            json j = {{"id", it.id},
                      {"title", it.title},
                      {"expected", it.expectation},
                      {"as_expected", it.as_expected},
                      {"report", to_json(it.report)},
                      {"detail", it.detail}};
            if (!it.constants.empty()) {
                json cs = json::array();
                for (const Real& c : it.constants) cs.push_back(c.to_string());
                j["constants"] = cs;
            }
            arr.push_back(j);
        } else {
            out << it.id << ". " << it.title << "\n";
            out << "   expected: " << it.expectation << "\n";
            out << "   verdict: " << to_string(it.report.verdict);
            if (!it.report.passed()) out << " (" << to_string(it.report.reason) << ")";
            if (it.report.witness) out << ", witness " << it.report.witness->to_string();
            out << "\n   " << it.detail << "\n";
            out << "   " << (it.as_expected ? "as expected" : "FLIPPED") << "\n";
        }
    }
    if (o.json) out << json{{"items", arr}, {"broken", broken}}.dump() << "\n";
    if (broken) throw Error(ErrorCode::CatalogBroken, "a catalog verdict flipped");
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Primitives of real functions with explicit domains", "primcalc"};
    app.require_subcommand(1);
    Options o;
    auto window = [&o](CLI::App* c) {
        c->add_option("--window", o.window, "Working window A B (exact tokens such as 4pi)")->expected(2);
    };
    auto json_flag = [&o](CLI::App* c) { c->add_flag("--json", o.json, "JSON output"); };
    auto trace_flag = [&o](CLI::App* c) { c->add_flag("--trace", o.trace, "Print the rule trace"); };

    CLI::App* dom = app.add_subcommand("domain", "Natural domain of an expression");
    dom->add_option("expr", o.expr, "Expression in x")->required();
    window(dom);
    json_flag(dom);

    CLI::App* chk = app.add_subcommand("check", "Is F a primitive of f?");
    chk->add_option("--F", o.F, "Candidate primitive")->required();
    chk->add_option("--f", o.f, "Integrand")->required();
    window(chk);
    json_flag(chk);

    CLI::App* fam = app.add_subcommand("family", "The family P(f)");
    fam->add_option("--f", o.f, "Integrand")->required();
    window(fam);
    json_flag(fam);
    trace_flag(fam);

    CLI::App* def = app.add_subcommand("defint", "Definite integral");
    def->add_option("--f", o.f, "Integrand")->required();
    def->add_option("--a", o.a, "Lower limit")->required();
    def->add_option("--b", o.b, "Upper limit")->required();
    def->add_option("--via-g", o.via_g, "Change of variables x = g(t)");
    def->add_option("--g-domain", o.g_domain, "Interval of t mapped onto [a,b]")->expected(2);
    window(def);
    json_flag(def);
    trace_flag(def);

    CLI::App* sub = app.add_subcommand("subst", "Change of variables");
    sub->add_option("--f", o.f, "Integrand (outer function for forward mode)")->required();
    sub->add_option("--g", o.g, "Substitution g")->required();
    sub->add_option("--g-inverse", o.g_inverse, "Rule of g^-1 (inverse and relaxed modes)");
    sub->add_option("--mode", o.mode, "forward, inverse or relaxed")
        ->check(CLI::IsMember({"forward", "inverse", "relaxed"}));
    sub->add_option("--g-domain", o.g_domain, "Domain of g")->expected(2);
    window(sub);
    json_flag(sub);
    trace_flag(sub);

    CLI::App* cat = app.add_subcommand("counterexamples", "Catalog of failure modes of the bare integral sign");
    json_flag(cat);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "primcalc: " << e.what() << "\n";
        return 2;
    }

    try {
        if (dom->parsed()) return cmd_domain(o, out);
        if (chk->parsed()) return cmd_check(o, out);
        if (fam->parsed()) return cmd_family(o, out);
        if (def->parsed()) return cmd_defint(o, out, err);
        if (sub->parsed()) return cmd_subst(o, out);
        if (cat->parsed()) return cmd_counterexamples(o, out);
    } catch (const ParseError& e) {
        err << "primcalc: " << to_string(e.code()) << " at offset " << e.offset() << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "primcalc: " << to_string(e.code()) << ": " << e.what() << "\n";
        if (e.report()) print_report(*e.report(), err);
        if (e.trace() && !e.trace()->steps.empty()) print_trace(*e.trace(), err);
        if (o.json) {
            json j = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
            if (e.report()) j["report"] = to_json(*e.report());
            if (e.trace()) j["trace"] = to_json(*e.trace());
            out << j.dump() << "\n";
        }
        return exit_code(e.code());
    }
    err << app.help();
    return 2;
}

}  // namespace primcalc
