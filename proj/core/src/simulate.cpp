// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "skorokhod/diffusion.hpp"
#include "skorokhod/errors.hpp"
#include "skorokhod/rng.hpp"

namespace skorokhod {

namespace {

struct PathResult {
    double x = 0.0;
    double tau = 0.0;
    bool unstopped = false;
    bool exited = false;
};

class PathSimulator {
public:
    PathSimulator(const DiffusionSpec& sde, const Measure& initial, const Barrier& r, const SimParams& p,
                  std::span<const double> snaps)
        : sde_(sde), initial_(initial), r_(r), p_(p), snaps_(snaps) {}

    /// Runs path `index`; snapshot values go to snap_out (one per snapshot time).
    PathResult run(std::uint64_t index, std::span<double> snap_out) const {
        StreamRng rng(p_.seed, index);
        double x0 = initial_.quantile(rng.uniform());
        std::size_t next_snap = 0;
        auto record_until = [&](double t, double value) {
            while (next_snap < snaps_.size() && snaps_[next_snap] <= t) snap_out[next_snap++] = value;
        };
        auto finish = [&](double tau, double x, bool unstopped, bool exited) {
            record_until(kInf, x);
            return PathResult{x, tau, unstopped, exited};
        };

        if (stops(0.0, x0)) return finish(0.0, x0, false, false);
        record_until(0.0, x0);

        const double dt = p_.dt;
        const double cap = p_.t_cap;
        const auto n_steps = static_cast<std::int64_t>(std::ceil(cap / dt - 1e-9));
        const Domain& dom = sde_.domain();
        const bool check_domain = dom.bounded();
        for (std::int64_t n = 0; n < n_steps; ++n) {
            const double t0 = static_cast<double>(n) * dt;
            const double t1 = n + 1 == n_steps ? cap : static_cast<double>(n + 1) * dt;
            const double h = t1 - t0;
            const double x1 = x0 + sde_.sigma(t0, x0) * std::sqrt(h) * rng.normal();
            if (check_domain && !dom.contains(x1)) return finish(t0, x0, false, true);

            if (stops(t1, x1)) {
                // bisection on the fraction of the segment at which t >= r(x) first holds
                double lo = 0.0;
                double hi = 1.0;
                for (int k = 0; k < p_.refine_iters; ++k) {
                    const double mid = 0.5 * (lo + hi);
                    if (stops(t0 + mid * h, x0 + mid * (x1 - x0))) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                const double tau = t0 + hi * h;
                const double xs = x0 + hi * (x1 - x0);
                interpolate_snaps(next_snap, snap_out, t0, x0, t1, x1, tau);
                return finish(tau, xs, false, false);
            }
            interpolate_snaps(next_snap, snap_out, t0, x0, t1, x1, t1);
            x0 = x1;
        }
        return finish(cap, x0, true, false);
    }

private:
    [[nodiscard]] bool stops(double t, double x) const noexcept { return t >= p_.t_eval || t >= r_.eval(x); }

    /// snapshots with time in (t0, until] take the segment value
    void interpolate_snaps(std::size_t& next, std::span<double> out, double t0, double x0, double t1, double x1,
                           double until) const noexcept {
        while (next < snaps_.size() && snaps_[next] <= until) {
            const double w = (snaps_[next] - t0) / (t1 - t0);
            out[next++] = x0 + w * (x1 - x0);
        }
    }

    const DiffusionSpec& sde_;
    const Measure& initial_;
    const Barrier& r_;
    const SimParams& p_;
    std::span<const double> snaps_;
};

}  // namespace

EmpiricalLaw simulate_stopped(const DiffusionSpec& sde, const Measure& initial, const Barrier& r,
                              const SimParams& params) {
    if (!(params.dt > 0.0) || !std::isfinite(params.dt)) throw InvalidArgument("simulate: dt must be > 0");
    if (params.n_paths < 0) throw InvalidArgument("simulate: n_paths must be >= 0");
    if (!(params.t_cap > 0.0) || !std::isfinite(params.t_cap)) throw InvalidArgument("simulate: t_cap must be finite, > 0");
    if (!(params.t_eval >= 0.0)) throw InvalidArgument("simulate: t_eval must be >= 0");
    if (std::isfinite(params.t_eval) && params.t_eval > params.t_cap)
        throw InvalidArgument("simulate: t_eval must be <= t_cap or inf");
    if (params.refine_iters < 0) throw InvalidArgument("simulate: refine_iters must be >= 0");
    if (initial.empty() || std::abs(initial.total_mass() - 1.0) > 1e-9)
        throw InvalidArgument("simulate: initial law must be a probability measure");
    if (sde.domain().bounded()) {
        const auto hull = initial.support_hull();
        if (hull && !(sde.domain().contains(hull->first) && sde.domain().contains(hull->second)))
            throw InvalidArgument("simulate: initial law must live inside the domain");
    }

    std::vector<double> snaps = params.snapshot_times;
    for (double s : snaps) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("simulate: snapshot times must be finite, >= 0");
    }
    std::vector<std::size_t> order(snaps.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return snaps[a] < snaps[b]; });
    std::vector<double> sorted(snaps.size());
    for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = snaps[order[k]];

    const auto n = static_cast<std::size_t>(params.n_paths);
    EmpiricalLaw law;
    law.seed = params.seed;
    law.dt = params.dt;
    law.n_paths = params.n_paths;
    law.samples.resize(n);
    law.stop_times.resize(n);
    law.snapshot_times = snaps;
    law.snapshots.assign(snaps.size(), std::vector<double>(n));

    if (std::all_of(r.cells().begin(), r.cells().end(), [](double v) { return std::isinf(v); })) {
        law.warnings.emplace_back("barrier is infinite on its whole grid; paths stop only outside [" +
                                  format_number(r.lo()) + ", " + format_number(r.hi()) + "]");
    }

    std::vector<std::uint8_t> unstopped(n, 0);
    std::vector<std::uint8_t> exited(n, 0);
    const PathSimulator sim(sde, initial, r, params, sorted);
    const int threads = params.threads > 0 ? params.threads : default_thread_count();
    detail::parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> buf(sorted.size());
        for (std::size_t i = begin; i < end; ++i) {
            const auto res = sim.run(i, buf);
            law.samples[i] = res.x;
            law.stop_times[i] = res.tau;
            unstopped[i] = res.unstopped ? 1 : 0;
            exited[i] = res.exited ? 1 : 0;
            for (std::size_t k = 0; k < sorted.size(); ++k) law.snapshots[order[k]][i] = buf[k];
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        law.unstopped += unstopped[i];
        law.exited += exited[i];
    }
    if (law.exited > 0) {
        law.warnings.emplace_back(std::to_string(law.exited) + " paths left the domain");
    }
    return law;
}

}  // namespace skorokhod
