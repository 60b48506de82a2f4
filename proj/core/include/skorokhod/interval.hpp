// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

namespace skorokhod {

/// Real interval with per-endpoint closedness. Default is open (lo, hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;
    bool hi_closed = false;

    [[nodiscard]] bool contains(double x) const noexcept {
        const bool above = lo_closed ? x >= lo : x > lo;
        const bool below = hi_closed ? x <= hi : x < hi;
        return above && below;
    }
    [[nodiscard]] double length() const noexcept { return hi > lo ? hi - lo : 0.0; }
    [[nodiscard]] bool empty() const noexcept {
        return hi < lo || (hi == lo && !(lo_closed && hi_closed));
    }

    friend bool operator==(const Interval&, const Interval&) = default;
};

using IntervalSet = std::vector<Interval>;

[[nodiscard]] inline bool contains(const IntervalSet& set, double x) noexcept {
    for (const auto& i : set) {
        if (i.contains(x)) return true;
    }
    return false;
}

}  // namespace skorokhod
