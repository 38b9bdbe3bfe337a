// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference values computed without the library: closed forms, a fixed-grid
// composite Simpson rule, a five-point derivative stencil and hand-solved
// zero sets. Tests compare the library against these.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// e - e^(-sqrt(2)/2): integral of e^cos(x) sin(x) over [0, 3pi/4].
inline double exp_cos_sin_integral() { return std::exp(1.0) - std::exp(-std::sqrt(2.0) / 2.0); }

/// Composite Simpson on n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Five-point central difference.
inline double derivative(const std::function<double(double)>& f, double x, double h = 1e-3) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Zeros of 1 - cos x + sin x in (lo, hi): sqrt(2) sin(x - pi/4) = -1 gives
/// x = 2k pi or x = 3pi/2 + 2k pi.
inline std::vector<double> weierstrass_denominator_zeros(double lo, double hi) {
    std::vector<double> z;
    for (int k = -20; k <= 20; ++k)
        for (double base : {0.0, 1.5 * kPi}) {
            double x = base + 2.0 * kPi * k;
            if (x > lo && x < hi) z.push_back(x);
        }
    std::sort(z.begin(), z.end());
    return z;
}

/// Zeros of sin(x)/(1+cos(x)+sin(x))'s numerator and denominator in (lo, hi):
/// sin x = 0 at k pi; 1 + cos x + sin x = 0 at pi + 2k pi and 3pi/2 + 2k pi.
inline std::vector<double> textbook_primitive_breaks(double lo, double hi) {
    std::vector<double> z;
    for (int k = -40; k <= 40; ++k) {
        double a = kPi * k;
        if (a > lo && a < hi) z.push_back(a);
        double b = 1.5 * kPi + 2.0 * kPi * k;
        if (b > lo && b < hi) z.push_back(b);
    }
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end(), [](double p, double q) { return std::abs(p - q) < 1e-12; }), z.end());
    return z;
}

/// Deterministic points in (lo, hi).
inline std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) xs.push_back(lo + (i + 0.5) / n * (hi - lo));
    return xs;
}

}  // namespace oracle
