// SPDX-License-Identifier: MIT
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "exact_checks.hpp"
#include "skorokhod/errors.hpp"
#include "skorokhod/verify.hpp"

using namespace skorokhod;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

SolveGrid grid(double lo, double hi, int nx, int nt, double t_cap) {
    SolveGrid g;
    g.x_min = lo;
    g.x_max = hi;
    g.n_x = nx;
    g.n_t = nt;
    g.t_cap = t_cap;
    return g;
}

EmbeddingProblem from_origin(Measure mu) { return {Measure::dirac(0.0), std::move(mu), DiffusionSpec::brownian()}; }

Measure two_point() { return Measure::sum(std::vector{Measure::dirac(-1.0, 0.5), Measure::dirac(1.0, 0.5)}); }

Measure truncated_gaussian() { return Measure::gaussian(0.0, 1.0).restricted(-2.0, 2.0).normalized(); }

EmbeddingProblem normal_problem() { return from_origin(Measure::gaussian(0.0, 1.0)); }
SolveGrid normal_grid() { return grid(-8, 8, 600, 600, 2.0); }
EmbeddingProblem uniform_problem() { return from_origin(Measure::uniform(-1.0, 1.0)); }
SolveGrid uniform_grid() { return grid(-2, 2, 601, 600, 2.0); }
SolveGrid two_point_grid() { return grid(-4, 4, 601, 600, 2.0); }

/// Every grid point and cell midpoint of r inside [lo, hi].
std::vector<double> probe_points(const Barrier& r, double lo, double hi) {
    std::vector<double> xs;
    const auto& g = r.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] >= lo && g[i] <= hi) xs.push_back(g[i]);
        if (i + 1 < g.size()) {
            const double m = 0.5 * (g[i] + g[i + 1]);
            if (m >= lo && m <= hi) xs.push_back(m);
        }
    }
    return xs;
}

Result criterion_1() {
    const auto t0 = Clock::now();
    const auto res = solve(normal_problem(), normal_grid());
    const double secs = seconds_since(t0);
    double lo = kInf;
    double hi = -kInf;
    for (double x : probe_points(res.barrier, -2.0, 2.0)) {
        const double v = res.barrier.eval(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool ok = lo >= 0.95 && hi <= 1.05 && secs < 60.0;
    return {ok, "r on |x|<=2 in [" + fmt(lo) + ", " + fmt(hi) + "], " + fmt(secs) + " s"};
}

Result criterion_2() {
    const auto t0 = Clock::now();
    const auto g = two_point_grid();
    const auto res = solve(from_origin(two_point()), g);
    const double secs = seconds_since(t0);
    const double dt = res.grid.dt();
    std::size_t finite_inside = 0;
    for (double x : probe_points(res.barrier, -0.9, 0.9)) {
        if (std::abs(x) < 0.9 && res.barrier.eval(x) != kInf) ++finite_inside;
    }
    double worst_outside = 0.0;
    for (double x : probe_points(res.barrier, g.x_min - 1.0, g.x_max + 1.0)) {
        if (std::abs(x) >= 1.05) worst_outside = std::max(worst_outside, res.barrier.eval(x));
    }
    const bool ok = finite_inside == 0 && worst_outside <= 2.0 * dt && secs < 60.0;
    return {ok, std::to_string(finite_inside) + " finite values on (-0.9, 0.9), max r on |x|>=1.05 = " +
                    fmt(worst_outside) + " (2dt = " + fmt(2.0 * dt) + "), " + fmt(secs) + " s"};
}

Result criterion_3() {
    const auto res = solve(normal_problem(), normal_grid());
    SimParams sim;
    sim.n_paths = 100000;
    sim.dt = 2.5e-4;
    sim.seed = 1;
    sim.t_cap = 2.0;
    sim.threads = 1;
    const auto t0 = Clock::now();
    const auto law = simulate_stopped(DiffusionSpec::brownian(), Measure::dirac(0.0), res.barrier, sim);
    const double secs = seconds_since(t0);
    const double ks = ks_distance(law, Measure::gaussian(0.0, 1.0));
    const double rate = law.unstopped_rate();
    const bool ok = ks < 0.015 && rate < 1e-3 && secs < 300.0;
    return {ok, "KS = " + fmt(ks) + ", unstopped rate = " + fmt(rate) + ", " + fmt(secs) + " s single-threaded"};
}

std::vector<CorridorSpec> monotone(std::initializer_list<std::array<double, 3>> xyt) {
    std::vector<CorridorSpec> cs;
    for (const auto& [x, y, t] : xyt) cs.push_back({x, y, {}, t, t});
    return cs;
}

Result criterion_4() {
    struct Case {
        const char* name;
        EmbeddingProblem problem;
        SolveGrid grid;
        std::vector<CorridorSpec> corridors;
    };
    const std::vector<Case> cases{
        {"normal", normal_problem(), normal_grid(),
         monotone({{-0.5, 0.5, 1.2}, {0.0, 1.0, 1.5}, {-2.0, -1.0, 1.1}, {1.0, 3.0, 1.8}, {-1.0, 1.0, 1.05}})},
        {"uniform", uniform_problem(), uniform_grid(),
         monotone({{-0.5, 0.5, 0.37}, {-0.75, 0.75, 0.31}, {-0.9, 0.25, 0.395}, {-0.25, 0.25, 0.394}, {-1.0, 1.0, 0.1}})},
    };
    int failures = 0;
    int total = 0;
    std::string first_failure;
    for (const auto& c : cases) {
        const auto res = solve(c.problem, c.grid);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            SimParams sim;
            sim.n_paths = 100000;
            sim.dt = 1e-3;
            sim.seed = seed;
            sim.t_cap = c.grid.t_cap;
            for (const auto& chk : check_corridor_monotonicity(c.problem, res.barrier, c.corridors, sim)) {
                ++total;
                if (!chk.ok()) {
                    ++failures;
                    if (first_failure.empty()) first_failure = std::string(c.name) + " seed " + std::to_string(seed) + ": " + chk.note;
                }
            }
        }
    }
    std::string detail = std::to_string(total - failures) + "/" + std::to_string(total) + " corridor runs pass";
    if (!first_failure.empty()) detail += "; first failure " + first_failure;
    return {failures == 0, detail};
}

Result criterion_5() {
    struct Case {
        EmbeddingProblem problem;
        SolveGrid grid;
        std::uint64_t seed;
        std::vector<CorridorSpec> specs;
    };
    const std::vector<Case> cases{
        {from_origin(two_point()), two_point_grid(), 2,
         {{-1.0, 1.0, {Interval{-0.5, 0.5}}, 0.1, 0.3},
          {-1.0, 1.0, {Interval{-0.9, -0.5}, Interval{0.5, 0.9}}, 0.5, 1.0},
          {-1.0, 1.0, {Interval{-0.2, 0.2}}, 0.2, 0.6}}},
        {uniform_problem(), uniform_grid(), 3,
         {{-0.5, 0.5, {Interval{-0.2, 0.2}}, 0.37, 0.39}, {-0.75, 0.75, {Interval{-0.4, 0.4}}, 0.31, 0.36}}},
    };
    int passed = 0;
    int total = 0;
    int nested_violations = 0;
    std::string failures;
    for (const auto& c : cases) {
        const auto res = solve(c.problem, c.grid);
        SimParams sim;
        sim.n_paths = 100000;
        sim.dt = 2.5e-4;
        sim.seed = c.seed;
        sim.t_cap = c.grid.t_cap;
        for (const auto& chk : check_corridor_bound(c.problem, res.barrier, c.specs, sim)) {
            ++total;
            if (chk.ok()) {
                ++passed;
            } else {
                failures += " [" + chk.note + "]";
            }
        }
        // k over nested sub-corridors never exceeds k over the enclosing one
        for (const auto& s : c.specs) {
            const double outer = density_sup_bound(c.problem.diffusion, s.s, s.t, s.x, s.y);
            for (int i = 1; i <= 20; ++i) {
                const double shrink = 0.45 * (s.y - s.x) * i / 20.0;
                const double inner = density_sup_bound(c.problem.diffusion, s.s, s.t, s.x + shrink, s.y - 0.5 * shrink);
                if (!(inner <= outer)) ++nested_violations;
            }
        }
    }
    const bool ok = passed == total && total == 5 && nested_violations == 0;
    return {ok, std::to_string(passed) + "/" + std::to_string(total) + " bounds hold, " +
                    std::to_string(nested_violations) + " nested-k violations" + failures};
}

Result criterion_6() {
    const auto t0 = Clock::now();
    const auto res = build_counterexample(0.0, 3, counterexample_grid());
    const double secs = seconds_since(t0);
    int failed = 0;
    std::string names;
    for (const auto& c : res.report.checks()) {
        if (!c.ok()) {
            ++failed;
            names += " " + c.name;
        }
    }
    const auto mod = continuity_modulus(res.barrier);
    const bool ok = failed == 0 && res.report.checks().size() >= 4 && mod.max_jump == kInf && secs < 300.0;
    return {ok, std::to_string(res.report.checks().size() - failed) + "/" + std::to_string(res.report.checks().size()) +
                    " assertions hold" + names + ", modulus " + (mod.max_jump == kInf ? "INF" : fmt(mod.max_jump)) +
                    ", " + fmt(secs) + " s"};
}

Result criterion_7() {
    std::string detail;
    bool ok = true;
    const auto run = [&](const char* name, const EmbeddingProblem& p, double lo, double hi) {
        const std::vector<SolveGrid> gs{grid(lo, hi, 301, 300, 2.0), grid(lo, hi, 601, 600, 2.0)};
        const auto rep = theorem_suite(p, gs);
        const auto* coarse = rep.find("modulus[301x300]");
        const auto* fine = rep.find("modulus[601x600]");
        ok = ok && rep.passed() && coarse && fine && fine->statistic <= coarse->statistic;
        detail += std::string(name) + (rep.passed() ? " ok" : " FAILED");
        if (coarse && fine) detail += " (modulus " + fmt(coarse->statistic) + " -> " + fmt(fine->statistic) + ")";
        detail += "; ";
    };
    run("uniform", uniform_problem(), -2.0, 2.0);
    run("truncated gaussian", from_origin(truncated_gaussian()), -3.0, 3.0);
    try {
        const std::vector<SolveGrid> gs{grid(-8, 8, 301, 300, 3.0), grid(-8, 8, 601, 600, 3.0)};
        (void)theorem_suite(from_origin(counterexample_measure(0.0, 3)), gs);
        ok = false;
        detail += "counterexample accepted";
    } catch (const HypothesisViolation&) {
        detail += "counterexample refused";
    }
    return {ok, detail};
}

Result criterion_8() {
    std::string detail;
    bool ok = true;
    const auto atom_free = [&](const char* name, const EmbeddingProblem& p, const SolveGrid& g) {
        const auto res = solve(p, g);
        const auto spikes = liminf_spikes(p.mu, res.barrier, res.grid.dt());
        std::size_t right = 0;
        double where = 0.0;
        for (const auto& s : spikes) {
            if (s.from_right) {
                if (right == 0) where = s.x;
                ++right;
            }
        }
        if (right > 0) ok = false;
        detail += std::string(name) + ": " + std::to_string(right) + " right spikes" +
                  (right > 0 ? " (first at x = " + fmt(where) + ")" : "") + "; ";
    };
    atom_free("normal", normal_problem(), normal_grid());
    atom_free("uniform", uniform_problem(), uniform_grid());
    atom_free("truncated gaussian", from_origin(truncated_gaussian()), grid(-3, 3, 601, 600, 2.0));

    const auto res = solve(from_origin(two_point()), two_point_grid());
    std::set<double> flagged;
    for (const auto& s : liminf_spikes(two_point(), res.barrier, res.grid.dt())) flagged.insert(s.x);
    const bool exact = flagged == std::set<double>{-1.0, 1.0};
    ok = ok && exact;
    detail += "two-point flags {";
    for (double x : flagged) detail += " " + fmt(x);
    detail += " }";
    return {ok, detail};
}

Result criterion_9() {
    const auto res = solve(uniform_problem(), uniform_grid());
    const auto mu = Measure::uniform(-1.0, 1.0);
    const double dt = res.grid.dt();
    const auto right = tail_zero_check(mu, res.barrier, 1.0, dt, Side::right);
    const auto left = tail_zero_check(mu, res.barrier, -1.0, dt, Side::left);
    const bool ok = right.outcome == Outcome::pass && left.outcome == Outcome::pass;
    return {ok, "max r beyond 1 = " + fmt(right.statistic) + ", below -1 = " + fmt(left.statistic) +
                    " (2dt = " + fmt(2.0 * dt) + ")"};
}

Result criterion_10() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    const auto tent = exact::tent_normalization(rng, 100);
    const auto cal = exact::calibrate_round_trip(rng, 100);
    const auto mix = exact::mixture_middle_half(rng, 100);
    const auto conc = exact::potential_concavity(rng, 100);
    const double secs = seconds_since(t0);
    const double worst = std::max({tent.error, cal.error, mix.error, conc.error});
    const bool ok = worst <= 1e-10 && secs < 5.0;
    return {ok, "worst errors: tent " + fmt(tent.error) + ", calibrate " + fmt(cal.error) + ", mixture " +
                    fmt(mix.error) + ", concavity " + fmt(conc.error) + "; " + fmt(secs) + " s"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
        {"constant-barrier recovery", criterion_1},   {"exit-time recovery", criterion_2},
        {"embedding fidelity", criterion_3},          {"continuous crossing over 10 seeds", criterion_4},
        {"corridor estimates", criterion_5},          {"counterexample reproduction", criterion_6},
        {"theorem proxy", criterion_7},               {"atom consistency", criterion_8},
        {"zero tail", criterion_9},                   {"exact arithmetic", criterion_10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        if (!r.pass) ++failed;
        std::printf("criterion %2zu %-36s %s  %s\n", i + 1, criteria[i].first, r.pass ? "PASS" : "FAIL",
                    r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
