// SPDX-License-Identifier: Apache-2.0
#include "primcalc/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "primcalc/error.hpp"

namespace primcalc {

double Constant::value() const {
    double c = coef.to_double();
    switch (symbol) {
        case Symbol::One: return c;
        case Symbol::Pi: return c * std::numbers::pi;
        case Symbol::E: return c * std::numbers::e;
    }
    return c;
}

Expr::Expr() : Expr(make_const(Constant{})) {}

Expr Expr::make_const(Constant c) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    if (c.coef.is_zero()) c.symbol = Constant::Symbol::One;
    n->constant = c;
    return Expr(std::move(n));
}

Expr Expr::make_var() {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    return Expr(std::move(n));
}

Expr Expr::make_unary(Op op, Expr a) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->children.push_back(std::move(a));
    return Expr(std::move(n));
}

Expr Expr::make_binary(Op op, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->children.push_back(std::move(a));
    n->children.push_back(std::move(b));
    return Expr(std::move(n));
}

Expr Expr::make_pow(Expr base, Rational exponent) {
    if (exponent.den() != 1 && exponent.den() != 2)
        throw Error(ErrorCode::InvalidArgument,
                    "exponent must be an integer or half-integer, got " + exponent.to_string());
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->exponent = exponent;
    n->children.push_back(std::move(base));
    return Expr(std::move(n));
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op() || a.arity() != b.arity()) return false;
    if (a.op() == Op::Const) return a.constant() == b.constant();
    if (a.op() == Op::Pow && a.exponent() != b.exponent()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!(a.child(i) == b.child(i))) return false;
    return true;
}

Expr num(std::int64_t p, std::int64_t q) { return Expr::make_const({Rational(p, q), Constant::Symbol::One}); }
Expr num(const Rational& r) { return Expr::make_const({r, Constant::Symbol::One}); }
Expr pi_const(const Rational& multiple) { return Expr::make_const({multiple, Constant::Symbol::Pi}); }
Expr euler_const() { return Expr::make_const({Rational(1), Constant::Symbol::E}); }
Expr var_x() { return Expr::make_var(); }

Expr operator-(const Expr& a) { return Expr::make_unary(Op::Neg, a); }
Expr operator+(const Expr& a, const Expr& b) { return Expr::make_binary(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make_binary(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make_binary(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make_binary(Op::Div, a, b); }
Expr pow(const Expr& base, const Rational& exponent) { return Expr::make_pow(base, exponent); }
Expr abs(const Expr& a) { return Expr::make_unary(Op::Abs, a); }
Expr sqrt(const Expr& a) { return Expr::make_unary(Op::Sqrt, a); }
Expr exp(const Expr& a) { return Expr::make_unary(Op::Exp, a); }
Expr ln(const Expr& a) { return Expr::make_unary(Op::Ln, a); }
Expr sin(const Expr& a) { return Expr::make_unary(Op::Sin, a); }
Expr cos(const Expr& a) { return Expr::make_unary(Op::Cos, a); }
Expr tan(const Expr& a) { return Expr::make_unary(Op::Tan, a); }
Expr sec(const Expr& a) { return Expr::make_unary(Op::Sec, a); }
Expr arcsin(const Expr& a) { return Expr::make_unary(Op::Arcsin, a); }
Expr arctan(const Expr& a) { return Expr::make_unary(Op::Arctan, a); }

std::string_view function_name(Op op) {
    switch (op) {
        case Op::Abs: return "abs";
        case Op::Sqrt: return "sqrt";
        case Op::Exp: return "exp";
        case Op::Ln: return "ln";
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Tan: return "tan";
        case Op::Sec: return "sec";
        case Op::Arcsin: return "arcsin";
        case Op::Arctan: return "arctan";
        default: return {};
    }
}

bool is_function(Op op) { return !function_name(op).empty(); }

// ---------------------------------------------------------------------------
// Parser

namespace {

const std::vector<std::pair<std::string_view, Op>>& function_table() {
    static const std::vector<std::pair<std::string_view, Op>> table = {
        {"abs", Op::Abs}, {"sqrt", Op::Sqrt}, {"exp", Op::Exp}, {"ln", Op::Ln},
        {"sin", Op::Sin}, {"cos", Op::Cos},   {"tan", Op::Tan}, {"sec", Op::Sec},
        {"arcsin", Op::Arcsin}, {"arctan", Op::Arctan},
    };
    return table;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) { advance(); }

    Expr parse() {
        if (cur_.kind == Tok::End) fail({"expression"});
        Expr e = expr();
        if (cur_.kind != Tok::End) fail({"+", "-", "*", "/", "end of input"});
        return e;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        std::string msg = "syntax error at offset " + std::to_string(cur_.offset) + ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg += (i + 1 == expected.size()) ? " or " : ", ";
            msg += "'" + expected[i] + "'";
        }
        if (cur_.kind == Tok::End) msg += ", found end of input";
        else msg += ", found '" + std::string(cur_.text) + "'";
        throw ParseError(ErrorCode::Syntax, cur_.offset, std::move(expected), msg);
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::size_t start = pos_;
        if (pos_ >= src_.size()) {
            cur_ = {Tok::End, start, {}};
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                ++pos_;
            cur_ = {Tok::Number, start, src_.substr(start, pos_ - start)};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            cur_ = {Tok::Ident, start, src_.substr(start, pos_ - start)};
            return;
        }
        ++pos_;
        Tok k;
        switch (c) {
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '/': k = Tok::Slash; break;
            case '^': k = Tok::Caret; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            default:
                cur_ = {Tok::End, start, src_.substr(start, 1)};
                throw ParseError(ErrorCode::Syntax, start, {"expression"},
                                 "syntax error at offset " + std::to_string(start) +
                                     ": unexpected character '" + std::string(1, c) + "'");
        }
        cur_ = {k, start, src_.substr(start, 1)};
    }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k) fail({what});
        advance();
    }

    Expr expr() {
        Expr lhs = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            bool plus = cur_.kind == Tok::Plus;
            advance();
            Expr rhs = term();
            lhs = plus ? lhs + rhs : lhs - rhs;
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = factor();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            bool mul = cur_.kind == Tok::Star;
            advance();
            Expr rhs = factor();
            lhs = mul ? lhs * rhs : lhs / rhs;
        }
        return lhs;
    }

    Expr factor() {
        if (cur_.kind == Tok::Minus) {
            advance();
            return -factor();
        }
        Expr base = atom();
        if (cur_.kind == Tok::Caret) {
            advance();
            return pow(base, exponent());
        }
        return base;
    }

    std::int64_t signed_integer() {
        bool negative = false;
        if (cur_.kind == Tok::Minus) {
            negative = true;
            advance();
        }
        if (cur_.kind != Tok::Number || cur_.text.find('.') != std::string_view::npos)
            fail({"integer"});
        auto r = Rational::from_decimal(cur_.text);
        if (!r) fail({"integer"});
        advance();
        return negative ? -r->num() : r->num();
    }

    Rational exponent() {
        if (cur_.kind == Tok::LParen) {
            advance();
            std::int64_t p = signed_integer();
            Rational e(p);
            if (cur_.kind == Tok::Slash) {
                advance();
                if (cur_.kind != Tok::Number || cur_.text != "2") fail({"2"});
                advance();
                e = Rational(p, 2);
            }
            expect(Tok::RParen, ")");
            return e;
        }
        return Rational(signed_integer());
    }

    Expr atom() {
        switch (cur_.kind) {
            case Tok::Number: {
                auto r = Rational::from_decimal(cur_.text);
                if (!r) fail({"number"});
                advance();
                return num(*r);
            }
            case Tok::Ident: {
                std::string_view id = cur_.text;
                std::size_t at = cur_.offset;
                if (id == "x") {
                    advance();
                    return var_x();
                }
                if (id == "pi") {
                    advance();
                    return pi_const();
                }
                if (id == "e") {
                    advance();
                    return euler_const();
                }
                for (const auto& [name, op] : function_table()) {
                    if (name == id) {
                        advance();
                        expect(Tok::LParen, "(");
                        Expr arg = expr();
                        expect(Tok::RParen, ")");
                        return Expr::make_unary(op, arg);
                    }
                }
                throw ParseError(ErrorCode::UnknownIdentifier, at,
                                 {"x", "pi", "e", "abs", "sqrt", "exp", "ln", "sin", "cos", "tan",
                                  "sec", "arcsin", "arctan"},
                                 "unknown identifier '" + std::string(id) + "' at offset " +
                                     std::to_string(at));
            }
            case Tok::LParen: {
                advance();
                Expr e = expr();
                expect(Tok::RParen, ")");
                return e;
            }
            default:
                fail({"number", "x", "pi", "e", "function", "(", "-"});
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token cur_{Tok::End, 0, {}};
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Canonical form and printing

namespace {

Expr symbol_atom(Constant::Symbol s) {
    return s == Constant::Symbol::Pi ? pi_const() : euler_const();
}

Expr canonical_constant(const Constant& c) {
    const Rational& r = c.coef;
    std::int64_t p = r.num();
    std::int64_t q = r.den();
    std::int64_t ap = p < 0 ? -p : p;
    Expr numerator;
    if (c.symbol == Constant::Symbol::One) {
        numerator = p < 0 ? -num(ap) : num(ap);
    } else if (ap == 1) {
        numerator = p < 0 ? -symbol_atom(c.symbol) : symbol_atom(c.symbol);
    } else {
        numerator = (p < 0 ? -num(ap) : num(ap)) * symbol_atom(c.symbol);
    }
    if (q == 1) return numerator;
    return numerator / num(q);
}

bool is_atom_constant(const Constant& c) {
    if (c.symbol == Constant::Symbol::One) return c.coef.is_integer() && !c.coef.is_negative();
    return c.coef == Rational(1);
}

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

int precedence(const Expr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Sub: return kSum;
        case Op::Mul:
        case Op::Div: return kProduct;
        case Op::Neg: return kUnary;
        case Op::Pow: return kPower;
        default: return kAtom;
    }
}

void print(const Expr& e, bool nested, std::string& out);

void print_wrapped(const Expr& e, bool wrap, bool nested, std::string& out) {
    if (wrap) {
        out += '(';
        print(e, true, out);
        out += ')';
    } else {
        print(e, nested, out);
    }
}

std::string exponent_text(const Rational& r) {
    if (r.is_integer()) {
        if (r.is_negative()) return "(" + r.to_string() + ")";
        return r.to_string();
    }
    return "(" + std::to_string(r.num()) + "/2)";
}

void print(const Expr& e, bool nested, std::string& out) {
    switch (e.op()) {
        case Op::Const: {
            const Constant& c = e.constant();
            if (c.symbol == Constant::Symbol::Pi) out += "pi";
            else if (c.symbol == Constant::Symbol::E) out += "e";
            else out += c.coef.to_string();
            return;
        }
        case Op::Var: out += 'x'; return;
        case Op::Neg: {
            out += '-';
            const Expr& c = e.child();
            print_wrapped(c, precedence(c) < kUnary || c.op() == Op::Neg, nested, out);
            return;
        }
        case Op::Add:
        case Op::Sub: {
            print(e.lhs(), nested, out);
            const char* sep = e.op() == Op::Add ? (nested ? "+" : " + ") : (nested ? "-" : " - ");
            out += sep;
            const Expr& r = e.rhs();
            print_wrapped(r, precedence(r) <= kSum || r.op() == Op::Neg, nested, out);
            return;
        }
        case Op::Mul:
        case Op::Div: {
            const Expr& l = e.lhs();
            print_wrapped(l, precedence(l) < kProduct, nested, out);
            out += e.op() == Op::Mul ? '*' : '/';
            const Expr& r = e.rhs();
            print_wrapped(r, precedence(r) <= kProduct || r.op() == Op::Neg, nested, out);
            return;
        }
        case Op::Pow: {
            const Expr& b = e.child();
            print_wrapped(b, precedence(b) < kAtom, nested, out);
            out += '^';
            out += exponent_text(e.exponent());
            return;
        }
        default: {
            out += function_name(e.op());
            out += '(';
            print(e.child(), true, out);
            out += ')';
            return;
        }
    }
}

}  // namespace

Expr canonical(const Expr& e) {
    switch (e.op()) {
        case Op::Const:
            if (is_atom_constant(e.constant())) return e;
            return canonical_constant(e.constant());
        case Op::Var: return e;
        case Op::Pow: return pow(canonical(e.child()), e.exponent());
        default:
            if (e.arity() == 1) return Expr::make_unary(e.op(), canonical(e.child()));
            return Expr::make_binary(e.op(), canonical(e.lhs()), canonical(e.rhs()));
    }
}

std::string format_expr(const Expr& e) {
    std::string out;
    print(canonical(e), false, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool at_odd_half_pi(double u) {
    double r = std::remainder(u - std::numbers::pi / 2.0, std::numbers::pi);
    return std::abs(r) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u));
}

std::optional<double> finite(double v) {
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::optional<double> eval_at(const Expr& e, double x) {
    switch (e.op()) {
        case Op::Const: return e.constant().value();
        case Op::Var: return x;
        case Op::Pow: {
            auto b = eval_at(e.child(), x);
            if (!b) return std::nullopt;
            const Rational& n = e.exponent();
            if (n.is_integer()) {
                if (*b == 0.0 && n.is_negative()) return std::nullopt;
                if (n.is_zero()) return 1.0;
                return finite(std::pow(*b, static_cast<double>(n.num())));
            }
            if (*b < 0.0 || (*b == 0.0 && n.is_negative())) return std::nullopt;
            return finite(std::pow(std::sqrt(*b), static_cast<double>(n.num())));
        }
        default: break;
    }
    if (e.arity() == 2) {
        auto a = eval_at(e.lhs(), x);
        if (!a) return std::nullopt;
        auto b = eval_at(e.rhs(), x);
        if (!b) return std::nullopt;
        switch (e.op()) {
            case Op::Add: return finite(*a + *b);
            case Op::Sub: return finite(*a - *b);
            case Op::Mul: return finite(*a * *b);
            case Op::Div:
                if (*b == 0.0) return std::nullopt;
                return finite(*a / *b);
            default: return std::nullopt;
        }
    }
    auto u = eval_at(e.child(), x);
    if (!u) return std::nullopt;
    double v = *u;
    switch (e.op()) {
        case Op::Neg: return -v;
        case Op::Abs: return std::abs(v);
        case Op::Sqrt:
            if (v < 0.0) return std::nullopt;
            return std::sqrt(v);
        case Op::Exp: return finite(std::exp(v));
        case Op::Ln:
            if (v <= 0.0) return std::nullopt;
            return std::log(v);
        case Op::Sin: return std::sin(v);
        case Op::Cos: return std::cos(v);
        case Op::Tan:
            if (at_odd_half_pi(v)) return std::nullopt;
            return finite(std::tan(v));
        case Op::Sec:
            if (at_odd_half_pi(v)) return std::nullopt;
            return finite(1.0 / std::cos(v));
        case Op::Arcsin:
            if (v < -1.0 || v > 1.0) return std::nullopt;
            return std::asin(v);
        case Op::Arctan: return std::atan(v);
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Structural queries

Expr substitute(const Expr& e, const Expr& replacement) {
    switch (e.op()) {
        case Op::Const: return e;
        case Op::Var: return replacement;
        case Op::Pow: return pow(substitute(e.child(), replacement), e.exponent());
        default:
            if (e.arity() == 1) return Expr::make_unary(e.op(), substitute(e.child(), replacement));
            return Expr::make_binary(e.op(), substitute(e.lhs(), replacement),
                                     substitute(e.rhs(), replacement));
    }
}

bool contains_var(const Expr& e) {
    if (e.is_var()) return true;
    for (std::size_t i = 0; i < e.arity(); ++i)
        if (contains_var(e.child(i))) return true;
    return false;
}

bool is_total(const Expr& e) {
    switch (e.op()) {
        case Op::Const:
        case Op::Var: return true;
        case Op::Div:
            return is_total(e.lhs()) && e.rhs().is_const() && !e.rhs().is_zero();
        case Op::Ln:
        case Op::Sqrt:
        case Op::Tan:
        case Op::Sec:
        case Op::Arcsin: return false;
        case Op::Pow:
            return e.exponent().is_integer() && !e.exponent().is_negative() && is_total(e.child());
        default:
            for (std::size_t i = 0; i < e.arity(); ++i)
                if (!is_total(e.child(i))) return false;
            return true;
    }
}

bool is_polynomial(const Expr& e) {
    switch (e.op()) {
        case Op::Const:
        case Op::Var: return true;
        case Op::Neg: return is_polynomial(e.child());
        case Op::Add:
        case Op::Sub:
        case Op::Mul: return is_polynomial(e.lhs()) && is_polynomial(e.rhs());
        case Op::Div: return is_polynomial(e.lhs()) && e.rhs().is_const() && !e.rhs().is_zero();
        case Op::Pow:
            return e.exponent().is_integer() && !e.exponent().is_negative() && is_polynomial(e.child());
        default: return false;
    }
}

std::size_t depth(const Expr& e) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < e.arity(); ++i) d = std::max(d, 1 + depth(e.child(i)));
    return d;
}

std::optional<Real> constant_value(const Expr& e) {
    if (contains_var(e)) return std::nullopt;
    auto exact = [](const Expr& c) -> std::optional<Real> {
        const Constant& k = c.constant();
        if (k.symbol == Constant::Symbol::One) return Real::rational(k.coef);
        if (k.symbol == Constant::Symbol::Pi) return Real::pi_multiple(k.coef);
        return std::nullopt;
    };
    auto as_float = [&e]() -> std::optional<Real> {
        auto v = eval_at(e, 0.0);
        if (!v) return std::nullopt;
        return Real::from_double(*v);
    };
    switch (e.op()) {
        case Op::Const: {
            if (auto r = exact(e)) return r;
            return as_float();
        }
        case Op::Neg: {
            auto a = constant_value(e.child());
            if (!a) return std::nullopt;
            return -*a;
        }
        case Op::Add:
        case Op::Sub: {
            auto a = constant_value(e.lhs());
            auto b = constant_value(e.rhs());
            if (!a || !b) return std::nullopt;
            return e.op() == Op::Add ? *a + *b : *a - *b;
        }
        case Op::Mul:
        case Op::Div: {
            auto a = constant_value(e.lhs());
            auto b = constant_value(e.rhs());
            if (!a || !b) return std::nullopt;
            using K = Real::Kind;
            bool div = e.op() == Op::Div;
            if (div && b->value() == 0.0) return std::nullopt;
            if (a->kind() == K::Rational && b->kind() == K::Rational)
                return Real::rational(div ? a->coefficient() / b->coefficient()
                                          : a->coefficient() * b->coefficient());
            if (a->kind() == K::PiMultiple && b->kind() == K::Rational)
                return Real::pi_multiple(div ? a->coefficient() / b->coefficient()
                                             : a->coefficient() * b->coefficient());
            if (!div && a->kind() == K::Rational && b->kind() == K::PiMultiple)
                return Real::pi_multiple(a->coefficient() * b->coefficient());
            if (div && a->kind() == K::PiMultiple && b->kind() == K::PiMultiple)
                return Real::rational(a->coefficient() / b->coefficient());
            return as_float();
        }
        default: return as_float();
    }
}

namespace {

/// Best rational approximation by continued fractions, denominators <= max_den.
Rational approximate(double x, std::int64_t max_den) {
    if (std::abs(x) > 9.0e15) throw Error(ErrorCode::Overflow, "constant too large to represent exactly");
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int i = 0; i < 64; ++i) {
        double a = std::floor(r);
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t h2 = ai * h1 + h0;
        std::int64_t k2 = ai * k1 + k0;
        if (k2 > max_den || k2 <= 0) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        double frac = r - a;
        if (frac < 1e-18 || std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) == 0.0) break;
        r = 1.0 / frac;
        if (r > 1e18) break;
    }
    return Rational(h1, k1);
}

}  // namespace

Expr to_expr(const Real& r) {
    switch (r.kind()) {
        case Real::Kind::Rational: return num(r.coefficient());
        case Real::Kind::PiMultiple: return pi_const(r.coefficient());
        case Real::Kind::Float: return num(approximate(r.value(), 1000000000));
        default: throw Error(ErrorCode::InvalidArgument, "cannot turn an infinite value into a constant");
    }
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

Expr simplify_node(const Expr& e);

/// A summand or product viewed as coef * core. The core of a pure constant is
/// the unit constant of its symbol (1, pi or e).
struct Term {
    Rational coef;
    Expr core;
};

bool is_unit_symbol(const Expr& e) {
    return e.is_const() && e.constant().coef == Rational(1);
}

Term decompose(const Expr& e);

Expr combine_cores(const Expr& a, const Expr& b) {
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    return a * b;
}

Term decompose(const Expr& e) {
    switch (e.op()) {
        case Op::Const: {
            Constant c = e.constant();
            if (c.coef.is_zero()) return {Rational(0), num(1)};
            return {c.coef, Expr::make_const({Rational(1), c.symbol})};
        }
        case Op::Neg: {
            Term t = decompose(e.child());
            return {-t.coef, t.core};
        }
        case Op::Mul: {
            Term a = decompose(e.lhs());
            Term b = decompose(e.rhs());
            return {a.coef * b.coef, combine_cores(a.core, b.core)};
        }
        case Op::Div: {
            Term a = decompose(e.lhs());
            const Expr& d = e.rhs();
            if (d.is_const() && !d.is_zero()) {
                const Constant& c = d.constant();
                if (c.symbol == Constant::Symbol::One) return {a.coef / c.coef, a.core};
                Expr sym = Expr::make_const({Rational(1), c.symbol});
                return {a.coef / c.coef, a.core / sym};
            }
            return {a.coef, a.core / d};
        }
        default: return {Rational(1), e};
    }
}

Expr emit_term(const Rational& coef, const Expr& core) {
    if (is_unit_symbol(core)) return Expr::make_const({coef, core.constant().symbol});
    if (coef == Rational(1)) return core;
    if (coef.is_zero()) return is_total(core) ? num(0) : num(0) * core;
    if (coef == Rational(-1)) return -core;
    if (core.op() == Op::Div && coef.is_integer()) {
        return emit_term(coef, core.lhs()) / core.rhs();
    }
    std::int64_t p = coef.num();
    std::int64_t q = coef.den();
    Expr numerator = p == 1 ? core : (p == -1 ? -core : num(p) * core);
    if (q == 1) return numerator;
    return numerator / num(q);
}

void flatten_sum(const Expr& e, const Rational& sign, std::vector<Term>& out) {
    switch (e.op()) {
        case Op::Add:
            flatten_sum(e.lhs(), sign, out);
            flatten_sum(e.rhs(), sign, out);
            return;
        case Op::Sub:
            flatten_sum(e.lhs(), sign, out);
            flatten_sum(e.rhs(), -sign, out);
            return;
        case Op::Neg: flatten_sum(e.child(), -sign, out); return;
        default: {
            Term t = decompose(e);
            out.push_back({t.coef * sign, t.core});
        }
    }
}

Expr collect_sum(const Expr& e) {
    std::vector<Term> raw;
    flatten_sum(e, Rational(1), raw);
    std::vector<Term> terms;
    for (const Term& t : raw) {
        auto it = std::find_if(terms.begin(), terms.end(),
                               [&](const Term& u) { return u.core == t.core; });
        if (it == terms.end()) terms.push_back(t);
        else it->coef = it->coef + t.coef;
    }
    std::optional<Expr> acc;
    for (const Term& t : terms) {
        if (t.coef.is_zero() && is_total(t.core)) continue;
        bool negative = t.coef.is_negative();
        Rational mag = negative ? -t.coef : t.coef;
        if (!acc) {
            acc = emit_term(t.coef, t.core);
        } else if (negative) {
            acc = *acc - emit_term(mag, t.core);
        } else {
            acc = *acc + emit_term(mag, t.core);
        }
    }
    return acc ? *acc : num(0);
}

Expr collect_product(const Expr& e) {
    Term t = decompose(e);
    return emit_term(t.coef, t.core);
}

Expr simplify_pow(const Expr& e) {
    const Expr& b = e.child();
    const Rational& n = e.exponent();
    if (n == Rational(1)) return b;
    if (n.is_zero() && is_total(b)) return num(1);
    if (b.is_const() && b.constant().is_rational() && n.is_integer()) {
        const Rational& v = b.constant().coef;
        if (v.is_zero() && n.is_negative()) return e;
        std::int64_t k = n.num() < 0 ? -n.num() : n.num();
        if (k <= 64) {
            Rational acc(1);
            for (std::int64_t i = 0; i < k; ++i) acc = acc * v;
            return num(n.is_negative() ? Rational(1) / acc : acc);
        }
    }
    return e;
}

Expr simplify_node(const Expr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Sub:
        case Op::Neg: return collect_sum(e);
        case Op::Mul:
        case Op::Div: {
            if (e.op() == Op::Div && e.rhs().is_zero()) return e;
            return collect_product(e);
        }
        case Op::Pow: return simplify_pow(e);
        default: return e;
    }
}

}  // namespace

Expr simplify_basic(const Expr& e) {
    switch (e.op()) {
        case Op::Const:
        case Op::Var: return e;
        case Op::Pow: return simplify_node(pow(simplify_basic(e.child()), e.exponent()));
        default:
            if (e.arity() == 1) return simplify_node(Expr::make_unary(e.op(), simplify_basic(e.child())));
            return simplify_node(
                Expr::make_binary(e.op(), simplify_basic(e.lhs()), simplify_basic(e.rhs())));
    }
}

}  // namespace primcalc
