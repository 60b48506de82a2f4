// SPDX-License-Identifier: MIT
#pragma once

// Independent reference values: plain quadrature over densities and textbook
// closed forms, never the library's own potential or CDF code.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// composite Simpson rule with n (even) panels
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// E|Z| for a standard normal
inline double normal_abs_mean() { return std::sqrt(2.0 / std::numbers::pi); }

/// lognormal pdf of y when log y ~ N(m, s^2)
inline double lognormal_pdf(double y, double m, double s) {
    const double z = (std::log(y) - m) / s;
    return std::exp(-0.5 * z * z) / (y * s * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace oracle
