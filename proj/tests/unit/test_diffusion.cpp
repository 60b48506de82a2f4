// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "skorokhod/diffusion.hpp"
#include "skorokhod/errors.hpp"

using namespace skorokhod;

TEST(Assumptions, BrownianPassesWithZeroLipschitzRatio) {
    const auto rep = validate_assumptions(DiffusionSpec::brownian(), Box{0.0, 2.0, -5.0, 5.0});
    EXPECT_TRUE(rep.all_pass());
    EXPECT_EQ(rep.at("lipschitz").statistic, 0.0);
    EXPECT_EQ(rep.at("lower_bound").statistic, 1.0);
}

TEST(Assumptions, GeometricLowerBoundIsLeftEnd) {
    const auto rep = validate_assumptions(DiffusionSpec::geometric(), Box{0.0, 1.0, 0.5, 2.0});
    EXPECT_TRUE(rep.all_pass());
    EXPECT_NEAR(rep.at("lower_bound").statistic, 0.5, 1e-12);
}

TEST(Assumptions, VanishingSigmaFailsLowerBound) {
    const auto rep = validate_assumptions(DiffusionSpec::affine(0.0, 1.0), Box{0.0, 1.0, -1.0, 1.0});
    EXPECT_EQ(rep.at("lower_bound").status, CheckStatus::fail);
    EXPECT_FALSE(rep.all_pass());
}

TEST(Assumptions, BoxOutsideDomainFails) {
    const auto rep = validate_assumptions(DiffusionSpec::geometric(), Box{0.0, 1.0, -1.0, 2.0});
    EXPECT_EQ(rep.at("domain").status, CheckStatus::fail);
}

TEST(Assumptions, UnderstatedConstantFailsLipschitz) {
    const auto rep = validate_assumptions(DiffusionSpec::affine(1.0, 2.0, Domain{}, 0.5), Box{0.0, 1.0, 0.0, 3.0});
    EXPECT_EQ(rep.at("lipschitz").status, CheckStatus::fail);
}

TEST(TransitionDensity, BrownianPeak) {
    EXPECT_NEAR(transition_density(DiffusionSpec::brownian(), 0.0, 0.0, 1.0, 0.0), 0.398942, 1e-6);
    EXPECT_NEAR(transition_density(DiffusionSpec::brownian(), 0.5, 1.0, 2.5, 0.0),
                oracle::normal_pdf(1.0 / std::sqrt(2.0)) / std::sqrt(2.0), 1e-14);
}

TEST(TransitionDensity, GeometricIsLognormal) {
    const auto g = DiffusionSpec::geometric();
    EXPECT_NEAR(transition_density(g, 0.0, 1.0, 1.0, 1.0), 0.352065, 1e-5);
    EXPECT_NEAR(transition_density(g, 0.0, 1.0, 1.0, 1.0), oracle::lognormal_pdf(1.0, -0.5, 1.0), 1e-14);
    EXPECT_NEAR(transition_density(g, 0.2, 2.0, 0.7, 1.5), oracle::lognormal_pdf(1.5, std::log(2.0) - 0.25, std::sqrt(0.5)),
                1e-13);
    const double mass = oracle::simpson([&](double y) { return transition_density(g, 0.0, 1.0, 1.0, y); }, 1e-9, 60.0, 400000);
    // lognormal mass of (1e-9, 60) for log Y ~ N(-1/2, 1)
    EXPECT_NEAR(mass, oracle::normal_cdf(std::log(60.0) + 0.5) - oracle::normal_cdf(std::log(1e-9) + 0.5), 1e-6);
}

TEST(TransitionDensity, NoClosedFormThrows) {
    EXPECT_THROW((void)transition_density(DiffusionSpec::affine(1.0, 0.5), 0.0, 0.0, 1.0, 0.0), InvalidArgument);
}

TEST(DensitySupBound, BrownianPeakOnAnyInterval) {
    const auto b = DiffusionSpec::brownian();
    EXPECT_NEAR(density_sup_bound(b, 0.0, 1.0, -1.0, 1.0), 0.398942, 1e-6);
    EXPECT_NEAR(density_sup_bound(b, 0.0, 1.0, 2.0, 3.0), 0.398942, 1e-6);
}

TEST(DensitySupBound, GeometricDominatesSamples) {
    const auto g = DiffusionSpec::geometric();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = 0.5;
    const double y = 2.0;
    const double k = density_sup_bound(g, 0.0, 0.3, x, y);
    for (int i = 0; i < 20000; ++i) {
        const double a = x + (y - x) * u(rng);
        const double c = x + (y - x) * u(rng);
        EXPECT_LE(transition_density(g, 0.0, a, 0.3, c), k * (1.0 + 1e-12));
    }
}

TEST(DensitySupBound, NestedIntervalsMonotone) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto g = DiffusionSpec::geometric();
    for (int i = 0; i < 100; ++i) {
        const double x = 0.2 + 2.0 * u(rng);
        const double y = x + 0.05 + 2.0 * u(rng);
        const double xi = x + (y - x) * 0.5 * u(rng);
        const double yi = y - (y - xi) * 0.5 * u(rng);
        const double t = 0.05 + u(rng);
        EXPECT_LE(density_sup_bound(g, 0.0, t, xi, yi), density_sup_bound(g, 0.0, t, x, y));
    }
}
