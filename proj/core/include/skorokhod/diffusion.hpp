// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "skorokhod/barrier.hpp"
#include "skorokhod/measure.hpp"

namespace skorokhod {

enum class DiffusionKind { brownian, geometric, affine, table };

[[nodiscard]] std::string to_string(DiffusionKind kind);

/// Open interval (lo, hi); either end may be infinite.
struct Domain {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    [[nodiscard]] bool contains(double x) const noexcept { return x > lo && x < hi; }
    [[nodiscard]] bool bounded() const noexcept;
};

/// sigma values on a (t, x) grid, row-major in t. Bilinear in between and
/// clamped outside the grid.
struct SigmaTable {
    std::vector<double> t_grid;
    std::vector<double> x_grid;
    std::vector<double> values;
};

/// Driftless diffusion dX = sigma(t, X) dW on an open domain.
///
/// Immutable. sigma comes from a closed catalogue so that smoothness holds by
/// construction; the table kind is accepted but its smoothness is unverified.
class DiffusionSpec {
public:
    DiffusionSpec() = default;

    static DiffusionSpec brownian();
    /// sigma(t, x) = x on (0, inf)
    static DiffusionSpec geometric();
    /// sigma(t, x) = alpha + beta x. k defaults to max(|alpha|, |beta|).
    static DiffusionSpec affine(double alpha, double beta, Domain domain = {}, double k = -1.0);
    static DiffusionSpec table(SigmaTable table, Domain domain, double k);

    [[nodiscard]] DiffusionKind kind() const noexcept { return kind_; }
    [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
    /// declared Lipschitz/growth constant
    [[nodiscard]] double k() const noexcept { return k_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] bool has_closed_form() const noexcept {
        return kind_ == DiffusionKind::brownian || kind_ == DiffusionKind::geometric;
    }
    [[nodiscard]] bool time_homogeneous() const noexcept { return kind_ != DiffusionKind::table; }

    [[nodiscard]] double sigma(double t, double x) const noexcept {
        switch (kind_) {
            case DiffusionKind::brownian: return 1.0;
            case DiffusionKind::geometric: return x;
            case DiffusionKind::affine: return alpha_ + beta_ * x;
            case DiffusionKind::table: return table_sigma(t, x);
        }
        return 0.0;
    }

private:
    [[nodiscard]] double table_sigma(double t, double x) const noexcept;

    DiffusionKind kind_ = DiffusionKind::brownian;
    Domain domain_{};
    double k_ = 1.0;
    double alpha_ = 1.0;
    double beta_ = 0.0;
    SigmaTable table_{};
};

struct Box {
    double t_lo = 0.0;
    double t_hi = 1.0;
    double x_lo = -1.0;
    double x_hi = 1.0;
};

enum class CheckStatus { pass, fail, unverified };

[[nodiscard]] std::string to_string(CheckStatus s);

struct AssumptionCheck {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    double statistic = 0.0;
    double threshold = 0.0;
    std::string note;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;

    [[nodiscard]] bool all_pass() const noexcept;
    [[nodiscard]] const AssumptionCheck& at(const std::string& name) const;
};

/// Sampled checks of the Lipschitz, growth and lower-bound conditions on the
/// box, plus the smoothness and domain conditions. Report only, never throws
/// except for an empty box.
[[nodiscard]] AssumptionReport validate_assumptions(const DiffusionSpec& sde, const Box& box);

/// Transition density of X_t = y given X_s = x. Throws InvalidArgument for
/// kinds without a closed form.
[[nodiscard]] double transition_density(const DiffusionSpec& sde, double s, double x, double t, double y);

/// sup of transition_density(sde, s, x', t, y') over x', y' in [x, y].
[[nodiscard]] double density_sup_bound(const DiffusionSpec& sde, double s, double t, double x, double y);

struct SimParams {
    double dt = 2.5e-4;
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 0;
    double t_cap = 2.0;
    /// stop every path at t_eval if the barrier has not stopped it earlier
    double t_eval = kInf;
    /// 0 picks the default thread count
    int threads = 0;
    int refine_iters = 8;
    /// times t at which X_{t and tau} is also recorded
    std::vector<double> snapshot_times;
};

/// Per-path results of a stopped simulation.
struct EmpiricalLaw {
    /// X at min(t_eval, tau, t_cap)
    std::vector<double> samples;
    /// min(tau, t_eval, t_cap)
    std::vector<double> stop_times;
    std::uint64_t seed = 0;
    double dt = 0.0;
    std::int64_t n_paths = 0;

    /// paths that reached t_cap without stopping
    std::int64_t unstopped = 0;
    /// paths that left a bounded domain (stopped at the exit step)
    std::int64_t exited = 0;
    /// snapshots[k][i] = X_{snapshot_times[k] and tau} of path i
    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> snapshots;
    std::vector<std::string> warnings;

    [[nodiscard]] double unstopped_rate() const noexcept {
        return n_paths > 0 ? static_cast<double>(unstopped) / static_cast<double>(n_paths) : 0.0;
    }
};

/// Euler-Maruyama paths from `initial`, stopped at tau = inf{t : t >= r(X_t)}
/// (or at t_eval). The step that crosses is refined by bisection along the
/// linear segment. Bitwise deterministic for a given seed at any thread count.
[[nodiscard]] EmpiricalLaw simulate_stopped(const DiffusionSpec& sde, const Measure& initial, const Barrier& r,
                                            const SimParams& params);

/// Thread count used when SimParams::threads is 0: SKOROKHOD_THREADS if set,
/// else the hardware concurrency.
[[nodiscard]] int default_thread_count();

}  // namespace skorokhod
