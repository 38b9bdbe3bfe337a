// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "primcalc/exact.hpp"

namespace primcalc {

enum class Op {
    Const,
    Var,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Abs,
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sec,
    Arcsin,
    Arctan,
};

/// Exact constant: a rational multiple of 1, pi or e.
struct Constant {
    enum class Symbol { One, Pi, E };

    Rational coef;
    Symbol symbol = Symbol::One;

    double value() const;
    bool is_zero() const { return coef.is_zero(); }
    bool is_rational() const { return symbol == Symbol::One; }
    friend bool operator==(const Constant&, const Constant&) = default;
};

/// Immutable expression tree for the rule of a real function of x.
///
/// Nodes are shared; copying an Expr is a reference-count bump. Pow carries
/// its exponent (an integer or half-integer) in the node, not as a child.
class Expr {
public:
    /// The constant 0.
    Expr();

    Op op() const { return node_->op; }
    std::size_t arity() const { return node_->children.size(); }
    const Expr& child(std::size_t i = 0) const { return node_->children[i]; }
    const Expr& lhs() const { return node_->children[0]; }
    const Expr& rhs() const { return node_->children[1]; }
    const Constant& constant() const { return node_->constant; }
    const Rational& exponent() const { return node_->exponent; }

    bool is_const() const { return op() == Op::Const; }
    bool is_var() const { return op() == Op::Var; }
    bool is_rational(const Rational& r) const {
        return is_const() && constant().is_rational() && constant().coef == r;
    }
    bool is_zero() const { return is_const() && constant().is_zero(); }
    bool is_one() const { return is_rational(Rational(1)); }

    /// Structural (AST) equality.
    friend bool operator==(const Expr& a, const Expr& b);

    static Expr make_const(Constant c);
    static Expr make_var();
    static Expr make_unary(Op op, Expr a);
    static Expr make_binary(Op op, Expr a, Expr b);
    static Expr make_pow(Expr base, Rational exponent);

private:
    struct Node {
        Op op = Op::Const;
        Constant constant;
        Rational exponent;
        std::vector<Expr> children;
    };
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

// Builders. Named after the functions they denote; they take and return Expr
// so they never collide with the <cmath> overloads.
Expr num(std::int64_t p, std::int64_t q = 1);
Expr num(const Rational& r);
Expr pi_const(const Rational& multiple = Rational(1));
Expr euler_const();
Expr var_x();

Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Rational& exponent);
Expr abs(const Expr& a);
Expr sqrt(const Expr& a);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr sec(const Expr& a);
Expr arcsin(const Expr& a);
Expr arctan(const Expr& a);

/// Function name for unary function nodes ("sin", "abs", ...), empty otherwise.
std::string_view function_name(Op op);
bool is_function(Op op);

/// Parse the grammar
///   expr := term (("+"|"-") term)* ; term := factor (("*"|"/") factor)* ;
///   factor := "-" factor | atom ("^" exponent)? ;
///   atom := number | "pi" | "e" | "x" | func "(" expr ")" | "(" expr ")" ;
///   exponent := integer | "(" integer "/" "2" ")"
/// Throws ParseError with a byte offset and the expected-token set.
Expr parse_expr(std::string_view text);

/// Deterministic text form; parse_expr(format_expr(e)) == canonical(e).
std::string format_expr(const Expr& e);

/// Rewrites exact constants into the node structure the parser produces for
/// their printed form ("3*pi/2" -> Div(Mul(3, pi), 2)). Fixed point of
/// parse_expr o format_expr.
Expr canonical(const Expr& e);

/// Value at x, or nullopt when any subterm is undefined there.
std::optional<double> eval_at(const Expr& e, double x);

/// Sound, domain-preserving cleanup: constant folding, 0/1 identities, double
/// negation, x^1 -> x, collection of c*f terms. Terms that cancel are only
/// dropped when they are defined everywhere.
Expr simplify_basic(const Expr& e);

/// e with every occurrence of x replaced by `replacement` (composition e o g).
Expr substitute(const Expr& e, const Expr& replacement);

bool contains_var(const Expr& e);

/// True when the expression is defined for every real x by construction (no
/// division by a non-constant, ln, sqrt, tan, sec, arcsin or negative or
/// fractional power).
bool is_total(const Expr& e);

/// Polynomial in x built from constants, x, +, -, * and non-negative integer
/// powers (division by nonzero constants allowed).
bool is_polynomial(const Expr& e);

/// Exact value of a variable-free expression when it is a rational or a
/// rational multiple of pi; a float otherwise; nullopt if it contains x or
/// is undefined.
std::optional<Real> constant_value(const Expr& e);

/// Edges on the longest root-to-leaf path; a leaf has depth 0.
std::size_t depth(const Expr& e);

/// Converts a finite real to an Expr constant. Floats become the closest
/// continued-fraction convergent with denominator <= 10^9.
Expr to_expr(const Real& r);

}  // namespace primcalc
