// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "exact_checks.hpp"
#include "skorokhod/barrier.hpp"
#include "skorokhod/measure.hpp"

using namespace skorokhod;

TEST(Properties, TentNormalization) {
    std::mt19937_64 rng(101);
    const auto w = exact::tent_normalization(rng, 200);
    EXPECT_LE(w.error, 1e-10) << "instance " << w.instance;
}

TEST(Properties, CalibrateRoundTrip) {
    std::mt19937_64 rng(102);
    const auto w = exact::calibrate_round_trip(rng, 200);
    EXPECT_LE(w.error, 1e-10) << "instance " << w.instance;
}

TEST(Properties, MixtureMiddleHalfAndJensen) {
    std::mt19937_64 rng(103);
    const auto w = exact::mixture_middle_half(rng, 200);
    EXPECT_LE(w.error, 1e-10) << "instance " << w.instance;
}

TEST(Properties, PotentialConcavity) {
    std::mt19937_64 rng(104);
    const auto w = exact::potential_concavity(rng, 200);
    EXPECT_LE(w.error, 1e-10) << "instance " << w.instance;
}

TEST(Properties, CdfMonotoneAndBounded) {
    std::mt19937_64 rng(105);
    for (int i = 0; i < 100; ++i) {
        const auto m = exact::random_measure(rng);
        const double total = m.total_mass();
        double prev = 0.0;
        for (int k = 0; k <= 400; ++k) {
            const double x = -10.0 + 20.0 * k / 400.0;
            const double f = m.cdf(x);
            ASSERT_GE(f, prev - 1e-15);
            ASSERT_LE(m.cdf_before(x), f + 1e-15);
            prev = f;
        }
        ASSERT_NEAR(prev, total, 1e-10);
    }
}

TEST(Properties, PotentialAsymptoticSlopes) {
    std::mt19937_64 rng(106);
    for (int i = 0; i < 100; ++i) {
        const auto m = exact::random_measure(rng);
        const double total = m.total_mass();
        const double mom = m.first_moment();
        // u(x) = -total |x| + sign(x) mom outside the support
        ASSERT_NEAR(m.potential(50.0), -total * 50.0 + mom, 1e-9);
        ASSERT_NEAR(m.potential(-50.0), -total * 50.0 - mom, 1e-9);
    }
}

TEST(Properties, NormalizedMeasureIsProbability) {
    std::mt19937_64 rng(107);
    for (int i = 0; i < 100; ++i) {
        const auto m = exact::random_measure(rng).normalized();
        ASSERT_NEAR(m.total_mass(), 1.0, 1e-12);
        for (double u : {0.1, 0.5, 0.9}) {
            const double q = m.quantile(u);
            ASSERT_GE(m.cdf(q), u - 1e-9);
            ASSERT_LE(m.cdf_before(q), u + 1e-9);
        }
    }
}

TEST(Properties, BarrierEvalIsLowerSemiContinuous) {
    std::mt19937_64 rng(108);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> grid{-3.0};
        while (grid.size() < 12) grid.push_back(grid.back() + 0.1 + u(rng));
        std::vector<double> cells(grid.size() - 1);
        for (auto& c : cells) c = u(rng) < 0.15 ? kInf : 2.0 * u(rng);
        std::vector<double> points(grid.size());
        for (auto& p : points) p = 2.0 * u(rng);
        const Barrier r(grid, cells, points, 2.0);
        for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
            const double x = grid[k];
            const double v = r.eval(x);
            ASSERT_LE(v, r.eval(x - 1e-9));
            ASSERT_LE(v, r.eval(x + 1e-9));
        }
        ASSERT_EQ(r.eval(grid.front()), 0.0);
        ASSERT_EQ(r.eval(grid.back()), 0.0);
        ASSERT_EQ(r.eval(grid.back() + 1.0), 0.0);
    }
}

TEST(Properties, BarrierCsvRoundTrip) {
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> grid{-1.0 - u(rng)};
        while (grid.size() < 9) grid.push_back(grid.back() + 1e-3 + u(rng));
        std::vector<double> cells(grid.size() - 1);
        for (auto& c : cells) c = u(rng) < 0.2 ? kInf : u(rng);
        std::vector<double> points(grid.size());
        for (auto& p : points) p = u(rng);
        const Barrier r(grid, cells, points, 1.0);
        std::stringstream io;
        write_barrier_csv(io, r);
        const auto back = read_barrier_csv(io);
        ASSERT_EQ(back.grid(), r.grid());
        ASSERT_EQ(back.cells(), r.cells());
        for (std::size_t k = 0; k < grid.size(); ++k) ASSERT_EQ(back.eval_point(k), r.eval_point(k));
    }
}
