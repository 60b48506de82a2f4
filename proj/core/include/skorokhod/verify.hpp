// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skorokhod/barrier.hpp"
#include "skorokhod/diffusion.hpp"
#include "skorokhod/measure.hpp"
#include "skorokhod/obstacle_solver.hpp"

namespace skorokhod {

enum class Outcome { pass, fail, skipped };

[[nodiscard]] std::string to_string(Outcome o);

struct Check {
    std::string name;
    Outcome outcome = Outcome::pass;
    double statistic = 0.0;
    double threshold = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::string note;

    [[nodiscard]] bool ok() const noexcept { return outcome != Outcome::fail; }
};

/// Append-only list of checks for one scenario.
class VerificationReport {
public:
    VerificationReport() = default;
    explicit VerificationReport(std::string scenario) : scenario_(std::move(scenario)) {}

    void add(Check c) { checks_.push_back(std::move(c)); }
    void append(const VerificationReport& other);

    [[nodiscard]] const std::string& scenario() const noexcept { return scenario_; }
    [[nodiscard]] const std::vector<Check>& checks() const noexcept { return checks_; }
    /// true when every check passed or was skipped
    [[nodiscard]] bool passed() const noexcept;
    [[nodiscard]] std::size_t n_failed() const noexcept;
    [[nodiscard]] const Check* find(const std::string& name) const noexcept;

private:
    std::string scenario_;
    std::vector<Check> checks_;
};

/// sup_x |F_n(x) - F_m(x)| over the sample points, both one-sided limits.
[[nodiscard]] double ks_distance(std::span<const double> samples, const Measure& m);
[[nodiscard]] double ks_distance(const EmpiricalLaw& e, const Measure& m);

/// Corridor (x, y) with sub-intervals A and times s <= t.
struct CorridorSpec {
    double x = 0.0;
    double y = 0.0;
    IntervalSet A;
    double s = 0.0;
    double t = 0.0;
};

/// Checks t >= s >= max(r(x), r(y)) and, when require_A is set, that A lies in
/// (x, y) with inf r(A) >= t. Throws HypothesisViolation naming the failed
/// inequality.
void validate_corridor(const CorridorSpec& c, const Barrier& r, bool require_A);

/// Monte Carlo check of mu[(x, y)] <= mu_t[(x, y)] + 3 SE on one path
/// ensemble (SE of the paired difference).
[[nodiscard]] Check check_corridor_monotonicity(const EmbeddingProblem& problem, const Barrier& r,
                                                const CorridorSpec& c, const SimParams& sim);

/// Same check for several corridors on one shared path ensemble.
[[nodiscard]] std::vector<Check> check_corridor_monotonicity(const EmbeddingProblem& problem, const Barrier& r,
                                                             std::span<const CorridorSpec> cs, const SimParams& sim);

/// Monte Carlo check of mu_t[A] <= |A| k_{x,y} mu_s[(x, y)] + 3 SE, k from
/// density_sup_bound. Requires a closed-form transition density.
[[nodiscard]] Check check_corridor_bound(const EmbeddingProblem& problem, const Barrier& r, const CorridorSpec& c,
                                         const SimParams& sim);

[[nodiscard]] std::vector<Check> check_corridor_bound(const EmbeddingProblem& problem, const Barrier& r,
                                                      std::span<const CorridorSpec> cs, const SimParams& sim);

/// m[(y_n, y_n + eps_n)] / eps_n. With `within`, each window is first clipped
/// to the set and divided by the clipped length (NaN when the clip is empty).
[[nodiscard]] std::vector<double> density_ratio_scan_right(const Measure& m, double x, std::span<const double> eps,
                                                           std::span<const double> ys,
                                                           const std::optional<IntervalSet>& within = std::nullopt);

/// m[(y_n - eps_n, y_n + eps_n)] / eps_n, with the same clipping rule.
[[nodiscard]] std::vector<double> density_ratio_scan_sym(const Measure& m, double x, std::span<const double> eps,
                                                         std::span<const double> ys,
                                                         const std::optional<IntervalSet>& within = std::nullopt);

/// Grid points where the value next to the point (min over the 3 adjacent
/// cells) exceeds the point value by more than 2 dt.
struct SpikePoint {
    double x = 0.0;
    bool from_right = true;
    bool has_atom = false;
};

[[nodiscard]] std::vector<SpikePoint> liminf_spikes(const Measure& m, const Barrier& r, double dt);

/// Passes iff every right-hand spike sits on an atom of m. The mirrored
/// left-hand check is reported separately, labelled "by reflection".
[[nodiscard]] std::vector<Check> atom_consistency(const Measure& m, const Barrier& r, double dt);

enum class Side { right, left };

/// When m has no mass beyond x on the given side, passes iff r <= 2 dt there;
/// skipped otherwise.
[[nodiscard]] Check tail_zero_check(const Measure& m, const Barrier& r, double x, double dt,
                                    Side side = Side::right);

/// Smallest sampled target density on the embedding set, for the theorem gate.
struct DensityGate {
    bool ok = false;
    double k = 0.0;
    std::string reason;
};

[[nodiscard]] DensityGate density_gate(const EmbeddingProblem& problem, const SolveGrid& grid);

/// Solves on each grid (coarse to fine) and checks finiteness and a
/// non-increasing continuity modulus. Throws HypothesisViolation when the
/// density gate fails.
[[nodiscard]] VerificationReport theorem_suite(const EmbeddingProblem& problem, std::span<const SolveGrid> grids);

struct CounterexampleResult {
    Measure mu;
    Barrier barrier;
    VerificationReport report;
    /// x_1 > x_2 > ... > x_{n+1}
    std::vector<double> points;
    /// sub-solve time steps in original units, one per interval
    std::vector<double> time_steps;
};

/// Builds the discontinuous-barrier example on the dyadic points
/// x_i = x + 2^(1-i). `grid` is in the unit coordinates of each sub-interval
/// (the interval maps affinely onto (0, 1)). Sub-solve failures are rethrown
/// with the interval index.
[[nodiscard]] CounterexampleResult build_counterexample(double x, int n_intervals, const SolveGrid& grid,
                                                        int mixture_cells = 64);

/// The target law of build_counterexample without the sub-solves.
[[nodiscard]] Measure counterexample_measure(double x, int n_intervals, int mixture_cells = 64);

/// Grid for the counterexample sub-solves: [-0.25, 1.25] x [0, 3], 601 x 600.
[[nodiscard]] SolveGrid counterexample_grid();

}  // namespace skorokhod
