// SPDX-License-Identifier: MIT
#pragma once

// Randomized exact-arithmetic checks shared by the property tests and the
// acceptance binary. Each returns the worst error seen over its instances.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "skorokhod/measure.hpp"

namespace exact {

using skorokhod::Measure;

struct Worst {
    double error = 0.0;
    int instance = -1;

    void update(double e, int i) {
        if (!(e <= error)) {  // NaN counts as worst
            error = std::isnan(e) ? INFINITY : e;
            instance = i;
        }
    }
};

/// Simpson over each linear piece of an independently written density is
/// exact up to rounding; the library density must agree with it pointwise.
inline Worst tent_normalization(std::mt19937_64& rng, int n) {
    Worst w;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const double a = -5.0 + 10.0 * u(rng);
        const double b = a + 0.01 + 5.0 * u(rng);
        const double lambda = u(rng);
        const double p = (b - a) * 0.5 * (0.01 + 0.99 * u(rng));
        const auto left = [&](double x) { return (1.0 - lambda) * 2.0 * (a + p - x) / (p * p); };
        const auto right = [&](double x) { return lambda * 2.0 * (x - b + p) / (p * p); };
        const double quad = oracle::simpson(left, a, a + p, 2) + oracle::simpson(right, b - p, b, 2);
        w.update(std::abs(quad - 1.0), i);
        w.update(std::abs(Measure::tent(a, b, lambda, p).total_mass() - 1.0), i);
        for (int k = 1; k < 16; ++k) {
            const double x = a + (b - a) * k / 16.0;
            const double want = (x < a + p ? left(x) : 0.0) + (x > b - p ? right(x) : 0.0);
            w.update(std::abs(skorokhod::tent_density(lambda, p, a, b, x) - want) * p, i);
        }
    }
    return w;
}

inline Worst calibrate_round_trip(std::mt19937_64& rng, int n) {
    Worst w;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const double a = -5.0 + 10.0 * u(rng);
        const double b = a + 0.01 + 5.0 * u(rng);
        const double c = a + (b - a) * (0.001 + 0.998 * u(rng));
        const auto cal = skorokhod::calibrate_tent(a, b, c);
        const double scale = std::max({1.0, std::abs(a), std::abs(b)});
        w.update(std::abs(skorokhod::tent_mean(a, b, cal.lambda, cal.p) - c) / scale, i);
        w.update(std::abs(Measure::tent(a, b, cal.lambda, cal.p).mean() - c) / scale, i);
    }
    return w;
}

inline Measure random_inner_law(std::mt19937_64& rng, double a, double b) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double lo = a + (b - a) * 0.3 * u(rng);
    const double hi = b - (b - a) * 0.3 * u(rng);
    switch (rng() % 3) {
        case 0:
            return Measure::uniform(lo, hi).scaled(0.1 + u(rng));
        case 1:
            return Measure::gaussian(0.5 * (lo + hi), (hi - lo) * (hi - lo) * 0.1).restricted(lo, hi);
        default: {
            const std::vector<Measure> parts{Measure::dirac(lo + 0.25 * (hi - lo), 0.3 * u(rng) + 0.01),
                                             Measure::uniform(lo, hi)};
            return Measure::sum(parts);
        }
    }
}

/// Zero middle-half mass, preserved total mass and u_eta <= u_nu (eta is a
/// mean-preserving spread of nu, so nu precedes eta in convex order).
inline Worst mixture_middle_half(std::mt19937_64& rng, int n) {
    Worst w;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const double a = -3.0 + 6.0 * u(rng);
        const double b = a + 0.05 + 3.0 * u(rng);
        const auto nu = random_inner_law(rng, a, b);
        const int cells = 1 + static_cast<int>(rng() % 96);
        const auto eta = skorokhod::mixture_measure(nu, a, b, cells);
        w.update(eta.mass_open((3.0 * a + b) / 4.0, (a + 3.0 * b) / 4.0), i);
        w.update(std::abs(eta.total_mass() - nu.total_mass()), i);
        for (int k = 0; k <= 64; ++k) {
            const double x = a - 1.0 + (b - a + 2.0) * k / 64.0;
            w.update(std::max(0.0, eta.potential(x) - nu.potential(x)), i);
        }
    }
    return w;
}

inline Measure random_measure(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Measure> parts;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < k; ++j) {
        const double a = -4.0 + 8.0 * u(rng);
        const double b = a + 0.05 + 2.0 * u(rng);
        switch (rng() % 5) {
            case 0: parts.push_back(Measure::dirac(a, 0.05 + u(rng))); break;
            case 1: parts.push_back(Measure::uniform(a, b).scaled(0.05 + u(rng))); break;
            case 2: parts.push_back(Measure::gaussian(a, 0.05 + u(rng)).scaled(0.05 + u(rng))); break;
            case 3: parts.push_back(Measure::tent(a, b, u(rng), (b - a) * 0.5 * (0.05 + 0.95 * u(rng)))); break;
            default: parts.push_back(skorokhod::mixture_measure(Measure::uniform(a + 0.01, b - 0.01), a, b, 8)); break;
        }
    }
    return Measure::sum(parts);
}

/// Largest positive second difference of the potential on a random grid.
inline Worst potential_concavity(std::mt19937_64& rng, int n) {
    Worst w;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const auto m = random_measure(rng);
        std::vector<double> xs(200);
        for (auto& x : xs) x = -8.0 + 16.0 * u(rng);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        const auto pot = m.potential(xs);
        for (std::size_t j = 1; j + 1 < xs.size(); ++j) {
            // slope decrease between adjacent chords, scaled to a second difference
            const double s0 = (pot[j] - pot[j - 1]) / (xs[j] - xs[j - 1]);
            const double s1 = (pot[j + 1] - pot[j]) / (xs[j + 1] - xs[j]);
            const double h = std::min(xs[j] - xs[j - 1], xs[j + 1] - xs[j]);
            w.update(std::max(0.0, (s1 - s0) * h), i);
        }
    }
    return w;
}

}  // namespace exact
