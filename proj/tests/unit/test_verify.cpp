// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "skorokhod/errors.hpp"
#include "skorokhod/verify.hpp"

using namespace skorokhod;

namespace {

SolveGrid grid(double lo, double hi, int nx, int nt, double t_cap = 2.0) {
    SolveGrid g;
    g.x_min = lo;
    g.x_max = hi;
    g.n_x = nx;
    g.n_t = nt;
    g.t_cap = t_cap;
    return g;
}

SimParams sim(std::int64_t n, std::uint64_t seed) {
    SimParams p;
    p.n_paths = n;
    p.dt = 1e-3;
    p.seed = seed;
    return p;
}

EmbeddingProblem from_origin(Measure mu) { return {Measure::dirac(0.0), std::move(mu), DiffusionSpec::brownian()}; }

Measure two_point() { return Measure::sum(std::vector{Measure::dirac(-1.0, 0.5), Measure::dirac(1.0, 0.5)}); }

}  // namespace

TEST(Ks, ExactQuantilesWithinOneOverN) {
    const auto m = Measure::gaussian(0.0, 1.0);
    const int n = 1000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = m.quantile((i + 0.5) / n);
    EXPECT_LE(ks_distance(xs, m), 1.0 / n);
}

TEST(Ks, ShiftedTargetIsFar) {
    const auto m = Measure::gaussian(0.0, 1.0);
    std::vector<double> xs(1000);
    for (int i = 0; i < 1000; ++i) xs[i] = m.quantile((i + 0.5) / 1000.0);
    EXPECT_GT(ks_distance(xs, Measure::gaussian(1.0, 1.0)), 0.3);
}

TEST(Ks, AtomsUseBothOneSidedLimits) {
    const std::vector<double> xs{0.0, 0.0, 0.0, 0.0};
    EXPECT_DOUBLE_EQ(ks_distance(xs, Measure::dirac(0.0)), 0.0);
    EXPECT_DOUBLE_EQ(ks_distance(xs, two_point()), 0.5);
}

TEST(CorridorMonotonicity, FixedTimeStopIsEqual) {
    const auto p = from_origin(Measure::gaussian(0.0, 1.0));
    const auto r = Barrier::constant({-10.0, 10.0}, 1.0, 2.0);
    const auto c = check_corridor_monotonicity(p, r, CorridorSpec{-0.5, 0.5, {}, 1.0, 1.0}, sim(20000, 1));
    EXPECT_EQ(c.outcome, Outcome::pass);
    EXPECT_EQ(c.statistic, 0.0);
    EXPECT_EQ(c.n_samples, 20000);
}

TEST(CorridorMonotonicity, UniformHillHoldsAcrossCorridors) {
    const auto p = from_origin(Measure::uniform(-1.0, 1.0));
    const auto res = solve(p, grid(-2, 2, 401, 400));
    const double t = std::max(res.barrier.eval(-0.6), res.barrier.eval(0.6));
    const std::vector<CorridorSpec> cs{{-0.6, 0.6, {}, t, t}, {-0.6, 0.6, {}, t, t + 0.05}};
    for (const auto& c : check_corridor_monotonicity(p, res.barrier, cs, sim(20000, 2))) EXPECT_TRUE(c.ok()) << c.note;
}

TEST(CorridorMonotonicity, ViolatedHypothesisThrows) {
    const auto p = from_origin(Measure::gaussian(0.0, 1.0));
    const auto r = Barrier::constant({-10.0, 10.0}, 1.0, 2.0);
    try {
        (void)check_corridor_monotonicity(p, r, CorridorSpec{-0.5, 0.5, {}, 0.5, 0.5}, sim(10, 1));
        FAIL();
    } catch (const HypothesisViolation& e) {
        EXPECT_NE(std::string(e.what()).find("s >= r(x) v r(y)"), std::string::npos) << e.what();
    }
}

TEST(CorridorBound, EmptyAIsTrivial) {
    const auto p = from_origin(two_point());
    const Barrier r({-1.0, 1.0}, {kInf}, {0.0, 0.0}, 1.0);
    const auto c = check_corridor_bound(p, r, CorridorSpec{-1.0, 1.0, {Interval{0.2, 0.2, true, true}}, 0.1, 0.5},
                                        sim(10, 1));
    EXPECT_EQ(c.outcome, Outcome::pass);
    EXPECT_EQ(c.n_samples, 0);
}

TEST(CorridorBound, StripUnderPlateauPassesWithSlack) {
    const auto p = from_origin(two_point());
    const Barrier r({-1.0, -0.5, 0.5, 1.0}, {0.2, kInf, 0.2}, {0.0, 0.2, 0.2, 0.0}, 1.0);
    const CorridorSpec c{-1.0, 1.0, {Interval{-0.1, 0.1, true, true}}, 0.3, 0.6};
    const auto chk = check_corridor_bound(p, r, c, sim(20000, 3));
    EXPECT_EQ(chk.outcome, Outcome::pass) << chk.note;
    EXPECT_LT(chk.statistic, 0.0);
    EXPECT_NE(chk.note.find("slack"), std::string::npos);
}

TEST(CorridorBound, RequiresAUnderTheBarrier) {
    const auto p = from_origin(two_point());
    const Barrier r({-1.0, -0.5, 0.5, 1.0}, {0.2, kInf, 0.2}, {0.0, 0.2, 0.2, 0.0}, 1.0);
    const CorridorSpec c{-1.0, 1.0, {Interval{-0.8, -0.6, true, true}}, 0.3, 0.6};
    EXPECT_THROW((void)check_corridor_bound(p, r, c, sim(10, 3)), HypothesisViolation);
}

TEST(DensityScan, UniformRatios) {
    const auto m = Measure::uniform(0.0, 1.0);
    const std::vector<double> eps{0.1, 0.01, 0.001};
    const std::vector<double> ys{0.5, 0.5, 0.5};
    for (double v : density_ratio_scan_right(m, 0.5, eps, ys)) EXPECT_NEAR(v, 1.0, 1e-12);
    for (double v : density_ratio_scan_sym(m, 0.5, eps, ys)) EXPECT_NEAR(v, 2.0, 1e-12);
}

TEST(DensityScan, GaussianSymmetricApproachesTwiceDensity) {
    const auto m = Measure::gaussian(0.0, 1.0);
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    const std::vector<double> ys{0.0, 0.0, 0.0};
    const auto r = density_ratio_scan_sym(m, 0.0, eps, ys);
    EXPECT_NEAR(r.back(), 2.0 * oracle::normal_pdf(0.0), 1e-5);
}

TEST(DensityScan, LowerDensityBoundCarriesOver) {
    const auto m = Measure::gaussian(0.0, 1.0);
    const double k = oracle::normal_pdf(1.0) * 0.999;
    const std::vector<double> eps{0.1, 0.05, 0.01};
    const std::vector<double> ys{0.9, 0.6, 0.3};
    for (double v : density_ratio_scan_right(m, 0.3, eps, ys)) EXPECT_GE(v, k);
}

TEST(DensityScan, ClippingToEmbeddingSet) {
    const auto m = Measure::uniform(0.0, 1.0);
    const std::vector<double> eps{0.5};
    const std::vector<double> ys{0.75};
    const IntervalSet within{Interval{0.0, 1.0}};
    EXPECT_NEAR(density_ratio_scan_right(m, 0.75, eps, ys, within)[0], 1.0, 1e-12);
    const IntervalSet far{Interval{5.0, 6.0}};
    EXPECT_TRUE(std::isnan(density_ratio_scan_right(m, 0.75, eps, ys, far)[0]));
}

TEST(DensityScan, CounterexampleGapIsExactlyZero) {
    const auto mu = counterexample_measure(0.0, 3);
    const double mid = 0.75;  // middle of (0.5, 1)
    const std::vector<double> eps{0.12, 0.06, 0.01};
    const std::vector<double> ys{mid, mid, mid};
    for (double v : density_ratio_scan_sym(mu, mid, eps, ys)) EXPECT_EQ(v, 0.0);
    for (double v : density_ratio_scan_right(mu, mid, eps, ys)) EXPECT_EQ(v, 0.0);
}

TEST(AtomConsistency, TwoPointFlagsOnlyTheAtoms) {
    const auto g = grid(-4, 4, 601, 600);
    const auto res = solve(from_origin(two_point()), g);
    const auto spikes = liminf_spikes(two_point(), res.barrier, res.grid.dt());
    ASSERT_FALSE(spikes.empty());
    for (const auto& s : spikes) {
        EXPECT_EQ(std::abs(s.x), 1.0);
        EXPECT_TRUE(s.has_atom);
    }
    for (const auto& c : atom_consistency(two_point(), res.barrier, res.grid.dt())) EXPECT_EQ(c.outcome, Outcome::pass);
}

TEST(AtomConsistency, ManufacturedDownSpikeFails) {
    std::vector<double> xs;
    for (int i = 0; i <= 20; ++i) xs.push_back(-1.0 + 0.1 * i);
    std::vector<double> nodes(xs.size(), 1.0);
    nodes.front() = 0.0;
    nodes.back() = 0.0;
    const auto base = Barrier::from_nodes(xs, nodes, 2.0);
    auto points = base.points();
    points[10] = 0.2;  // r(0) well below both sides
    const Barrier spiked(xs, base.cells(), points, 2.0);
    const auto checks = atom_consistency(Measure::uniform(-1.0, 1.0), spiked, 0.01);
    ASSERT_EQ(checks.size(), 2u);
    EXPECT_EQ(checks[0].outcome, Outcome::fail);
    EXPECT_EQ(checks[1].name, "atom_consistency_by_reflection");
    EXPECT_EQ(checks[1].outcome, Outcome::fail);
    EXPECT_EQ(atom_consistency(Measure::dirac(0.0), spiked, 0.01)[0].outcome, Outcome::pass);
}

TEST(TailZero, UniformPassesBeyondSupportAndSkipsInside) {
    const auto g = grid(-2, 2, 601, 600);
    const auto mu = Measure::uniform(-1.0, 1.0);
    const auto res = solve(from_origin(mu), g);
    EXPECT_EQ(tail_zero_check(mu, res.barrier, 1.0, res.grid.dt()).outcome, Outcome::pass);
    EXPECT_EQ(tail_zero_check(mu, res.barrier, -1.0, res.grid.dt(), Side::left).outcome, Outcome::pass);
    EXPECT_EQ(tail_zero_check(mu, res.barrier, 0.0, res.grid.dt()).outcome, Outcome::skipped);
}

TEST(TailZero, DetectsPositiveBarrierPastTheSupport) {
    const auto r = Barrier::constant({-3.0, -1.0, 1.0, 3.0}, 0.5, 1.0);
    EXPECT_EQ(tail_zero_check(Measure::uniform(-1.0, 1.0), r, 1.0, 0.01).outcome, Outcome::fail);
}

TEST(TheoremSuite, UniformPassesAndModulusShrinks) {
    const std::vector<SolveGrid> gs{grid(-2, 2, 301, 300), grid(-2, 2, 601, 600)};
    const auto rep = theorem_suite(from_origin(Measure::uniform(-1.0, 1.0)), gs);
    EXPECT_TRUE(rep.passed());
    const auto* fine = rep.find("modulus[601x600]");
    ASSERT_NE(fine, nullptr);
    EXPECT_LE(fine->statistic, fine->threshold);
}

TEST(TheoremSuite, TruncatedGaussianPasses) {
    const auto mu = Measure::gaussian(0.0, 1.0).restricted(-1.0, 1.0).normalized();
    const std::vector<SolveGrid> gs{grid(-2, 2, 301, 300), grid(-2, 2, 601, 600)};
    EXPECT_TRUE(theorem_suite(from_origin(mu), gs).passed());
}

TEST(TheoremSuite, RefusesCounterexampleTarget) {
    const std::vector<SolveGrid> gs{grid(-8, 8, 301, 300, 3.0), grid(-8, 8, 601, 600, 3.0)};
    try {
        (void)theorem_suite(from_origin(counterexample_measure(0.0, 3)), gs);
        FAIL() << "expected the density gate to refuse";
    } catch (const HypothesisViolation& e) {
        EXPECT_NE(std::string(e.what()).find("density gate"), std::string::npos);
    }
}

TEST(TheoremSuite, RefusesAtoms) {
    const auto gate = density_gate(from_origin(two_point()), grid(-4, 4, 101, 50));
    EXPECT_FALSE(gate.ok);
    EXPECT_FALSE(gate.reason.empty());
}

TEST(Report, FindAndCounts) {
    VerificationReport rep("x");
    {
        Check c;
        c.name = "a";
        c.outcome = Outcome::pass;
        rep.add(c);
    }
    {
        Check c;
        c.name = "b";
        c.outcome = Outcome::skipped;
        rep.add(c);
    }
    EXPECT_TRUE(rep.passed());
    {
        Check c;
        c.name = "c";
        c.outcome = Outcome::fail;
        rep.add(c);
    }
    EXPECT_FALSE(rep.passed());
    EXPECT_EQ(rep.n_failed(), 1u);
    ASSERT_NE(rep.find("b"), nullptr);
    EXPECT_EQ(rep.find("z"), nullptr);
}
