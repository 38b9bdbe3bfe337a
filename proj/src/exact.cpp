// SPDX-License-Identifier: Apache-2.0
#include "primcalc/exact.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "primcalc/error.hpp"

namespace primcalc {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Error(ErrorCode::Overflow, "rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make(i128 n, i128 d) {
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    return Rational(narrow(n), narrow(d));
}

std::string shortest(double x) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
    if (den < 0) {
        num = narrow(-static_cast<i128>(num));
        den = narrow(-static_cast<i128>(den));
    }
    std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num_ = num;
    den_ = den;
}

Rational Rational::operator-() const { return make(-static_cast<i128>(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorCode::InvalidArgument, "rational division by zero");
    return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    i128 lhs = static_cast<i128>(a.num_) * b.den_;
    i128 rhs = static_cast<i128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::from_decimal(std::string_view text) {
    if (text.empty()) return std::nullopt;
    i128 num = 0;
    i128 den = 1;
    bool seen_dot = false;
    bool seen_digit = false;
    constexpr i128 limit = static_cast<i128>(1) << 100;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
        seen_digit = true;
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
        if (num > limit || den > limit) throw Error(ErrorCode::Overflow, "numeric literal too long");
    }
    if (!seen_digit) return std::nullopt;
    return make(num, den);
}

std::optional<Rational> Rational::nearest(double x, std::int64_t max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    for (std::int64_t q = 1; q <= max_den; ++q) {
        double p = std::round(x * static_cast<double>(q));
        if (std::abs(p) > 9.0e15) return std::nullopt;
        if (std::abs(p / static_cast<double>(q) - x) <= tol)
            return Rational(static_cast<std::int64_t>(p), q);
    }
    return std::nullopt;
}

Real Real::pi_multiple(Rational r) {
    if (r.is_zero()) return rational(r);
    return Real(Kind::PiMultiple, r, 0.0);
}

double Real::value() const {
    switch (kind_) {
        case Kind::Rational: return coef_.to_double();
        case Kind::PiMultiple: return coef_.to_double() * std::numbers::pi;
        case Kind::Float: return float_;
        case Kind::NegInfinity: return -std::numeric_limits<double>::infinity();
        case Kind::PosInfinity: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

std::string Real::to_string() const {
    switch (kind_) {
        case Kind::Rational: return coef_.to_string();
        case Kind::PiMultiple: {
            std::int64_t p = coef_.num();
            std::int64_t q = coef_.den();
            std::string s;
            if (p == 1) s = "pi";
            else if (p == -1) s = "-pi";
            else s = std::to_string(p) + "*pi";
            if (q != 1) s += "/" + std::to_string(q);
            return s;
        }
        case Kind::Float: return shortest(float_);
        case Kind::NegInfinity: return "-inf";
        case Kind::PosInfinity: return "inf";
    }
    return {};
}

Real Real::operator-() const {
    switch (kind_) {
        case Kind::Rational: return rational(-coef_);
        case Kind::PiMultiple: return pi_multiple(-coef_);
        case Kind::Float: return from_double(-float_);
        case Kind::NegInfinity: return infinity(true);
        case Kind::PosInfinity: return infinity(false);
    }
    return *this;
}

Real operator+(const Real& a, const Real& b) {
    using K = Real::Kind;
    if (a.kind_ == K::Rational && b.kind_ == K::Rational) return Real::rational(a.coef_ + b.coef_);
    if (a.kind_ == K::PiMultiple && b.kind_ == K::PiMultiple)
        return Real::pi_multiple(a.coef_ + b.coef_);
    if (a.kind_ == K::Rational && a.coef_.is_zero()) return b;
    if (b.kind_ == K::Rational && b.coef_.is_zero()) return a;
    return Real::from_double(a.value() + b.value());
}

bool identical(const Real& a, const Real& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ == Real::Kind::Float) return a.float_ == b.float_;
    return a.coef_ == b.coef_;
}

std::partial_ordering compare(const Real& a, const Real& b, double tol) {
    if (a.kind() == b.kind() && a.is_exact()) return a.coefficient() <=> b.coefficient();
    if (!a.is_finite() || !b.is_finite()) return a.value() <=> b.value();
    double x = a.value();
    double y = b.value();
    if (std::abs(x - y) <= tol) return std::partial_ordering::equivalent;
    return x <=> y;
}

Real snap(double x, const SnapOptions& opts) {
    if (!std::isfinite(x)) return Real::from_double(x);
    if (std::abs(x) <= opts.tol) return Real::integer(0);
    if (auto r = Rational::nearest(x / std::numbers::pi, opts.max_pi_den, opts.tol / std::numbers::pi))
        return Real::pi_multiple(*r);
    if (auto r = Rational::nearest(x, opts.max_rational_den, opts.tol)) return Real::rational(*r);
    return Real::from_double(x);
}

}  // namespace primcalc
