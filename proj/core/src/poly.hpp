// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace skorokhod::detail {

inline double poly_eval(std::span<const double> c, double s) noexcept {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * s + c[k];
    return acc;
}

/// Coefficients of q(s) = p(s + d).
inline std::vector<double> poly_shift(std::span<const double> c, double d) {
    std::vector<double> out(c.begin(), c.end());
    if (d == 0.0) return out;
    // repeated synthetic division (Taylor shift)
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = n - 1; k > i; --k) out[k - 1] += d * out[k];
    }
    return out;
}

/// int_0^s p(t) dt
inline double poly_m0(std::span<const double> c, double s) noexcept {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * s + c[k] / static_cast<double>(k + 1);
    return acc * s;
}

/// int_0^s t p(t) dt
inline double poly_m1(std::span<const double> c, double s) noexcept {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * s + c[k] / static_cast<double>(k + 2);
    return acc * s * s;
}

}  // namespace skorokhod::detail
