// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace primcalc {

/// Exact rational p/q with q > 0 and gcd(p, q) = 1.
///
/// Arithmetic is done in 128-bit intermediates; a result that does not fit
/// back into 64 bits throws Error(ErrorCode::Overflow).
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }
    Rational operator-() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// "p" or "p/q".
    std::string to_string() const;

    /// Exact value of a decimal literal such as "2", "0.25" or "12.5".
    static std::optional<Rational> from_decimal(std::string_view text);

    /// Smallest-denominator p/q (q <= max_den) within tol of x, if any.
    static std::optional<Rational> nearest(double x, std::int64_t max_den, double tol);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// An extended real used for domain endpoints, zeros and plug values.
///
/// Exact values are rationals or rational multiples of pi; anything else is
/// carried as a float. Infinite values only appear as interval endpoints.
class Real {
public:
    enum class Kind { Rational, PiMultiple, Float, NegInfinity, PosInfinity };

    Real() = default;
    static Real rational(Rational r) { return Real(Kind::Rational, r, 0.0); }
    static Real integer(std::int64_t n) { return rational(Rational(n)); }
    static Real pi_multiple(Rational r);
    static Real from_double(double x) { return Real(Kind::Float, Rational(), x); }
    static Real infinity(bool positive) {
        return Real(positive ? Kind::PosInfinity : Kind::NegInfinity, Rational(), 0.0);
    }

    Kind kind() const { return kind_; }
    bool is_exact() const { return kind_ == Kind::Rational || kind_ == Kind::PiMultiple; }
    bool is_finite() const { return kind_ != Kind::NegInfinity && kind_ != Kind::PosInfinity; }
    /// Coefficient of an exact value (the rational, or the multiplier of pi).
    const Rational& coefficient() const { return coef_; }

    double value() const;

    /// Canonical text: "0", "-3/2", "pi", "-pi/4", "3*pi/2", "-inf", or a
    /// shortest round-trip float literal.
    std::string to_string() const;

    Real operator-() const;
    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b) { return a + (-b); }

    /// Structural identity (same kind, same exact coefficient or same bits).
    friend bool identical(const Real& a, const Real& b);

private:
    Real(Kind k, Rational c, double f) : kind_(k), coef_(c), float_(f) {}

    Kind kind_ = Kind::Rational;
    Rational coef_;
    double float_ = 0.0;
};

/// Three-way comparison of extended reals. Two exact values of the same kind
/// compare exactly; every other pair compares by value with |a-b| <= tol
/// counted as equal.
std::partial_ordering compare(const Real& a, const Real& b, double tol = 1e-9);

inline bool equal(const Real& a, const Real& b, double tol = 1e-9) {
    return compare(a, b, tol) == std::partial_ordering::equivalent;
}
inline bool less(const Real& a, const Real& b, double tol = 1e-9) {
    return compare(a, b, tol) == std::partial_ordering::less;
}

struct SnapOptions {
    double tol = 1e-9;
    std::int64_t max_pi_den = 12;
    std::int64_t max_rational_den = 64;
};

/// Replace a numeric value by p/q*pi (q <= 12) or p/q (q <= 64) when it lies
/// within tol of one; otherwise keep the float. Multiples of pi win ties,
/// except that 0 is always the rational 0.
Real snap(double x, const SnapOptions& opts = {});

}  // namespace primcalc
