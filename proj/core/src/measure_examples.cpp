// SPDX-License-Identifier: MIT
//
// Tent laws and the tent mixture used to build measures whose Root barrier
// has infinite plateaus.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skorokhod/errors.hpp"
#include "skorokhod/measure.hpp"

namespace skorokhod {

double tent_density(double lambda, double p, double a, double b, double x) {
    if (!(a < b)) throw InvalidArgument("tent: need a < b");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("tent: lambda must lie in [0, 1]");
    if (!(p > 0.0)) throw InvalidArgument("tent: p must be positive");
    if (p > 0.5 * (b - a)) throw InvalidArgument("tent: p exceeds (b - a) / 2, the tents would overlap");
    if (!(x > a && x < b)) throw InvalidArgument("tent: x must lie in (a, b)");
    double value = 0.0;
    if (x < a + p) value += (1.0 - lambda) * 2.0 * (a + p - x) / (p * p);
    if (x > b - p) value += lambda * 2.0 * (x - b + p) / (p * p);
    return value;
}

double tent_mean(double a, double b, double lambda, double p) noexcept {
    return a + p / 3.0 + lambda * ((b - a) - 2.0 * p / 3.0);
}

TentCalibration calibrate_tent(double a, double b, double c) {
    if (!(a < b)) throw InvalidArgument("calibrate_tent: need a < b");
    if (!(c > a && c < b)) {
        std::ostringstream msg;
        msg << "calibrate_tent: mean " << c << " outside (" << a << ", " << b << ")";
        throw InvalidArgument(msg.str());
    }
    // (b - a)/8 unless c sits so close to an end that the lambda = 0 or
    // lambda = 1 mean would not bracket it; 1.5 * distance keeps c strictly inside
    const double p = std::min((b - a) / 8.0, 1.5 * std::min(c - a, b - c));
    const double lo_mean = tent_mean(a, b, 0.0, p);
    const double hi_mean = tent_mean(a, b, 1.0, p);
    if (!(lo_mean < c && c < hi_mean)) throw NumericalError("calibrate_tent: mean not bracketed");
    const double lambda = (c - lo_mean) / (hi_mean - lo_mean);
    return {lambda, p};
}

Measure mixture_measure(const Measure& nu, double a, double b, int n_cells) {
    if (!(a < b)) throw InvalidArgument("mixture: need a < b");
    if (n_cells < 1) throw InvalidArgument("mixture: n_cells must be >= 1");
    const double total = nu.total_mass();
    const double inside = nu.mass_open(a, b);
    if (total - inside > 1e-14 * std::max(1.0, total)) {
        std::ostringstream msg;
        msg << "mixture: nu has mass " << total - inside << " outside (" << a << ", " << b << ")";
        throw InvalidArgument(msg.str());
    }

    std::vector<DensityPiece> pieces;
    const double width = (b - a) / n_cells;
    for (int j = 0; j < n_cells; ++j) {
        const double lo = a + width * j;
        const double hi = j + 1 == n_cells ? b : a + width * (j + 1);
        // half-open cells (lo, hi], first one open at a
        const auto [mass, moment] = nu.mass_and_moment(Interval{lo, hi, false, j + 1 != n_cells});
        if (!(mass > 0.0)) continue;
        const double c = std::clamp(moment / mass, lo, hi);
        const auto [lambda, p] = calibrate_tent(a, b, c);
        if (lambda < 1.0)
            pieces.push_back({a, a + p, {mass * (1.0 - lambda) * 2.0 / p, -mass * (1.0 - lambda) * 2.0 / (p * p)}});
        if (lambda > 0.0) pieces.push_back({b - p, b, {0.0, mass * lambda * 2.0 / (p * p)}});
    }
    std::vector<Measure> parts;
    parts.reserve(pieces.size());
    for (auto& piece : pieces) parts.push_back(Measure::from_parts({}, {std::move(piece)}));
    if (parts.empty()) return Measure{};
    return Measure::sum(parts);
}

}  // namespace skorokhod
