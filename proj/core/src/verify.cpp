// SPDX-License-Identifier: MIT
#include "skorokhod/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "skorokhod/errors.hpp"

namespace skorokhod {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::pass: return "pass";
        case Outcome::fail: return "fail";
        case Outcome::skipped: return "skipped";
    }
    return "unknown";
}

void VerificationReport::append(const VerificationReport& other) {
    checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

bool VerificationReport::passed() const noexcept {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.ok(); });
}

std::size_t VerificationReport::n_failed() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(checks_.begin(), checks_.end(), [](const Check& c) { return !c.ok(); }));
}

const Check* VerificationReport::find(const std::string& name) const noexcept {
    for (const auto& c : checks_) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

double ks_distance(std::span<const double> samples, const Measure& m) {
    if (samples.empty()) return 0.0;
    const double total = m.total_mass();
    if (!(total > 0.0)) throw InvalidArgument("ks_distance: reference measure is zero");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double hi = static_cast<double>(i + 1) / n - m.cdf(xs[i]) / total;
        const double lo = m.cdf_before(xs[i]) / total - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    return d;
}

double ks_distance(const EmpiricalLaw& e, const Measure& m) { return ks_distance(e.samples, m); }

namespace {

std::string fmt(double v) { return format_number(v); }

double barrier_at(const Barrier& r, double x) { return r.eval(x); }

/// mean and standard error of a paired-difference sample
std::pair<double, double> mean_se(const std::vector<double>& d) {
    const double n = static_cast<double>(d.size());
    if (d.empty()) return {0.0, 0.0};
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
    if (d.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

bool in_open(double v, double a, double b) { return v > a && v < b; }

EmpiricalLaw run_ensemble(const EmbeddingProblem& problem, const Barrier& r, const SimParams& sim,
                          std::vector<double> snaps) {
    SimParams p = sim;
    p.t_eval = kInf;
    p.snapshot_times = std::move(snaps);
    return simulate_stopped(problem.diffusion, problem.mu0, r, p);
}

}  // namespace

void validate_corridor(const CorridorSpec& c, const Barrier& r, bool require_A) {
    auto fail = [](const std::string& what) { throw HypothesisViolation("corridor hypothesis violated: " + what); };
    if (!(c.x < c.y)) fail("x < y (x = " + fmt(c.x) + ", y = " + fmt(c.y) + ")");
    if (!(c.s >= 0.0) || !std::isfinite(c.t)) fail("0 <= s <= t < inf");
    if (!(c.t >= c.s)) fail("t >= s (t = " + fmt(c.t) + ", s = " + fmt(c.s) + ")");
    const double rx = barrier_at(r, c.x);
    const double ry = barrier_at(r, c.y);
    if (!(c.s >= std::max(rx, ry)))
        fail("s >= r(x) v r(y) (s = " + fmt(c.s) + ", r(x) = " + fmt(rx) + ", r(y) = " + fmt(ry) + ")");
    if (!require_A) return;
    for (const auto& a : c.A) {
        if (a.lo < c.x || a.hi > c.y || (a.lo == c.x && a.lo_closed) || (a.hi == c.y && a.hi_closed))
            fail("A inside (x, y) (A piece [" + fmt(a.lo) + ", " + fmt(a.hi) + "])");
        const double ra = r.infimum_on(a);
        if (!(ra >= c.t))
            fail("r(A) >= t (inf r on [" + fmt(a.lo) + ", " + fmt(a.hi) + "] = " + fmt(ra) + ", t = " + fmt(c.t) +
                 ")");
    }
}

namespace {

/// index of `t` in the sorted, de-duplicated snapshot list
std::size_t snap_index(const std::vector<double>& snaps, double t) {
    return static_cast<std::size_t>(std::lower_bound(snaps.begin(), snaps.end(), t) - snaps.begin());
}

std::vector<double> unique_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Check monotonicity_from_law(const EmpiricalLaw& law, const std::vector<double>& at_t, const CorridorSpec& c) {
    std::vector<double> d(law.samples.size());
    double lhs = 0.0;
    double rhs = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double a = in_open(law.samples[i], c.x, c.y) ? 1.0 : 0.0;
        const double b = in_open(at_t[i], c.x, c.y) ? 1.0 : 0.0;
        lhs += a;
        rhs += b;
        d[i] = a - b;
    }
    const auto [mean, se] = mean_se(d);
    const double n = std::max<double>(1.0, static_cast<double>(d.size()));
    std::ostringstream note;
    note << "(x,y) = (" << fmt(c.x) << ", " << fmt(c.y) << "), t = " << fmt(c.t) << ", mu[(x,y)] = " << lhs / n
         << ", mu_t[(x,y)] = " << rhs / n << ", slack = " << (rhs - lhs) / n << ", unstopped = " << law.unstopped;
    return {"corridor_monotonicity", mean <= 3.0 * se ? Outcome::pass : Outcome::fail, mean, 3.0 * se,
            law.n_paths, law.seed, note.str()};
}

Check bound_from_law(const EmpiricalLaw& law, const std::vector<double>& at_s, const std::vector<double>& at_t,
                     const CorridorSpec& c, double k) {
    double len = 0.0;
    for (const auto& a : c.A) len += a.length();
    const double factor = len * k;
    std::vector<double> d(law.samples.size());
    double lhs = 0.0;
    double mass_s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double a = contains(c.A, at_t[i]) ? 1.0 : 0.0;
        const double b = in_open(at_s[i], c.x, c.y) ? 1.0 : 0.0;
        lhs += a;
        mass_s += b;
        d[i] = a - factor * b;
    }
    const auto [mean, se] = mean_se(d);
    const double n = std::max<double>(1.0, static_cast<double>(d.size()));
    std::ostringstream note;
    note << "(x,y) = (" << fmt(c.x) << ", " << fmt(c.y) << "), s = " << fmt(c.s) << ", t = " << fmt(c.t)
         << ", mu_t[A] = " << lhs / n << ", |A| = " << len << ", k = " << k << ", mu_s[(x,y)] = " << mass_s / n
         << ", bound = " << factor * mass_s / n << ", slack = " << factor * mass_s / n - lhs / n;
    return {"corridor_bound", mean <= 3.0 * se ? Outcome::pass : Outcome::fail, mean, 3.0 * se, law.n_paths,
            law.seed, note.str()};
}

}  // namespace

std::vector<Check> check_corridor_monotonicity(const EmbeddingProblem& problem, const Barrier& r,
                                               std::span<const CorridorSpec> cs, const SimParams& sim) {
    std::vector<double> times;
    for (const auto& c : cs) {
        validate_corridor(c, r, false);
        if (c.t > sim.t_cap) throw HypothesisViolation("corridor: t exceeds the simulation horizon t_cap");
        times.push_back(c.t);
    }
    if (cs.empty()) return {};
    const auto snaps = unique_sorted(std::move(times));
    const auto law = run_ensemble(problem, r, sim, snaps);
    std::vector<Check> out;
    for (const auto& c : cs) out.push_back(monotonicity_from_law(law, law.snapshots[snap_index(snaps, c.t)], c));
    return out;
}

Check check_corridor_monotonicity(const EmbeddingProblem& problem, const Barrier& r, const CorridorSpec& c,
                                  const SimParams& sim) {
    return check_corridor_monotonicity(problem, r, std::span<const CorridorSpec>(&c, 1), sim).front();
}

std::vector<Check> check_corridor_bound(const EmbeddingProblem& problem, const Barrier& r,
                                        std::span<const CorridorSpec> cs, const SimParams& sim) {
    const Domain& dom = problem.diffusion.domain();
    std::vector<double> times;
    std::vector<std::optional<Check>> trivial(cs.size());
    std::vector<double> ks(cs.size(), 0.0);
    for (std::size_t j = 0; j < cs.size(); ++j) {
        const auto& c = cs[j];
        validate_corridor(c, r, true);
        if (c.t > sim.t_cap) throw HypothesisViolation("corridor: t exceeds the simulation horizon t_cap");
        if (!(dom.contains(c.x) && dom.contains(c.y)))
            throw HypothesisViolation("corridor: [x, y] must lie in the domain");
        double len = 0.0;
        for (const auto& a : c.A) len += a.length();
        if (len == 0.0) {
            trivial[j] = Check{"corridor_bound", Outcome::pass, 0.0, 0.0, 0, sim.seed, "A has length 0: left side is 0"};
        } else if (!(c.t > c.s)) {
            trivial[j] =
                Check{"corridor_bound", Outcome::pass, 0.0, kInf, 0, sim.seed, "t = s: the density bound is infinite"};
        } else {
            ks[j] = density_sup_bound(problem.diffusion, c.s, c.t, c.x, c.y);
            times.push_back(c.s);
            times.push_back(c.t);
        }
    }
    std::vector<Check> out;
    if (times.empty()) {
        for (auto& t : trivial) out.push_back(*t);
        return out;
    }
    const auto snaps = unique_sorted(std::move(times));
    const auto law = run_ensemble(problem, r, sim, snaps);
    for (std::size_t j = 0; j < cs.size(); ++j) {
        if (trivial[j]) {
            out.push_back(*trivial[j]);
            continue;
        }
        const auto& c = cs[j];
        out.push_back(bound_from_law(law, law.snapshots[snap_index(snaps, c.s)], law.snapshots[snap_index(snaps, c.t)],
                                     c, ks[j]));
    }
    return out;
}

Check check_corridor_bound(const EmbeddingProblem& problem, const Barrier& r, const CorridorSpec& c,
                           const SimParams& sim) {
    return check_corridor_bound(problem, r, std::span<const CorridorSpec>(&c, 1), sim).front();
}

namespace {

void check_scan_inputs(double x, std::span<const double> eps, std::span<const double> ys) {
    if (eps.size() != ys.size()) throw InvalidArgument("density scan: eps and y sequences must align");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw InvalidArgument("density scan: eps must be > 0");
        if (ys[i] < x) throw InvalidArgument("density scan: y must be >= x");
        if (i > 0 && (eps[i] > eps[i - 1] || ys[i] > ys[i - 1]))
            throw InvalidArgument("density scan: eps and y must be nonincreasing");
    }
}

double window_ratio(const Measure& m, double lo, double hi, double eps, const std::optional<IntervalSet>& within) {
    if (!within) return m.mass_open(lo, hi) / eps;
    double mass = 0.0;
    double len = 0.0;
    for (const auto& j : *within) {
        const double a = std::max(lo, j.lo);
        const double b = std::min(hi, j.hi);
        if (b > a) {
            mass += m.mass_open(a, b);
            len += b - a;
        }
    }
    return len > 0.0 ? mass / len : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<double> density_ratio_scan_right(const Measure& m, double x, std::span<const double> eps,
                                             std::span<const double> ys, const std::optional<IntervalSet>& within) {
    check_scan_inputs(x, eps, ys);
    std::vector<double> out(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) out[i] = window_ratio(m, ys[i], ys[i] + eps[i], eps[i], within);
    return out;
}

std::vector<double> density_ratio_scan_sym(const Measure& m, double x, std::span<const double> eps,
                                           std::span<const double> ys, const std::optional<IntervalSet>& within) {
    if (eps.size() != ys.size()) throw InvalidArgument("density scan: eps and y sequences must align");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw InvalidArgument("density scan: eps must be > 0");
        if (i > 0 && eps[i] > eps[i - 1]) throw InvalidArgument("density scan: eps must be nonincreasing");
        if (i > 0 && std::abs(ys[i] - x) > std::abs(ys[i - 1] - x))
            throw InvalidArgument("density scan: y must approach x");
    }
    std::vector<double> out(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double lo = ys[i] - eps[i];
        const double hi = ys[i] + eps[i];
        // with clipping the ratio is a density; rescale so both forms agree on mass / eps
        out[i] = within ? 2.0 * window_ratio(m, lo, hi, eps[i], within) : window_ratio(m, lo, hi, eps[i], within);
    }
    return out;
}

std::vector<SpikePoint> liminf_spikes(const Measure& m, const Barrier& r, double dt) {
    const auto& grid = r.grid();
    const auto& cells = r.cells();
    const std::size_t nc = cells.size();
    const double jump = 2.0 * dt;
    std::vector<SpikePoint> out;
    auto atom_near = [&](std::size_t i) {
        const double reach = std::max(i > 0 ? grid[i] - grid[i - 1] : 0.0, i + 1 < grid.size() ? grid[i + 1] - grid[i] : 0.0);
        return std::any_of(m.atoms().begin(), m.atoms().end(),
                           [&](const Atom& a) { return std::abs(a.location - grid[i]) < reach; });
    };
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double p = r.eval_point(i);
        if (std::isinf(p)) continue;
        double right = kInf;
        for (std::size_t k = i; k < std::min(nc, i + 3); ++k) right = std::min(right, cells[k]);
        double left = kInf;
        for (std::size_t k = i; k > 0 && k + 3 > i; --k) left = std::min(left, cells[k - 1]);
        if (right - p > jump) out.push_back({grid[i], true, atom_near(i)});
        if (left - p > jump) out.push_back({grid[i], false, atom_near(i)});
    }
    return out;
}

std::vector<Check> atom_consistency(const Measure& m, const Barrier& r, double dt) {
    const auto spikes = liminf_spikes(m, r, dt);
    std::vector<Check> out;
    for (bool right : {true, false}) {
        std::ostringstream flagged;
        std::int64_t unmatched = 0;
        std::int64_t count = 0;
        for (const auto& s : spikes) {
            if (s.from_right != right) continue;
            flagged << (count++ ? " " : "") << fmt(s.x) << (s.has_atom ? "" : "(no atom)");
            if (!s.has_atom) ++unmatched;
        }
        Check c;
        c.name = right ? "atom_consistency" : "atom_consistency_by_reflection";
        c.outcome = unmatched == 0 ? Outcome::pass : Outcome::fail;
        c.statistic = static_cast<double>(unmatched);
        c.threshold = 0.0;
        c.n_samples = static_cast<std::int64_t>(r.grid().size());
        c.note = "flagged points: [" + flagged.str() + "]";
        out.push_back(std::move(c));
    }
    return out;
}

Check tail_zero_check(const Measure& m, const Barrier& r, double x, double dt, Side side) {
    const bool right = side == Side::right;
    Check c;
    c.name = right ? "tail_zero" : "tail_zero_by_reflection";
    c.threshold = 2.0 * dt;
    c.n_samples = static_cast<std::int64_t>(r.grid().size());
    const double tail = right ? m.mass_open(x, kInf) : m.mass_open(-kInf, x);
    if (tail > 0.0) {
        c.outcome = Outcome::skipped;
        c.statistic = tail;
        c.note = "tail mass " + fmt(tail) + " > 0: hypothesis does not hold";
        return c;
    }
    const auto& grid = r.grid();
    double worst = 0.0;
    double where = x;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (right ? grid[i] >= x : grid[i] <= x) {
            if (r.eval_point(i) > worst) {
                worst = r.eval_point(i);
                where = grid[i];
            }
        }
        if (i + 1 < grid.size() && (right ? grid[i + 1] > x : grid[i] < x)) {
            if (r.cells()[i] > worst) {
                worst = r.cells()[i];
                where = 0.5 * (grid[i] + grid[i + 1]);
            }
        }
    }
    c.statistic = worst;
    c.outcome = worst <= c.threshold ? Outcome::pass : Outcome::fail;
    c.note = "max r beyond x = " + fmt(x) + " is " + fmt(worst) + " at " + fmt(where);
    return c;
}

namespace {

/// Refines the ends of each gap interval by bisection between the last gap
/// node and the first no-gap node.
IntervalSet refined_embedding_set(const EmbeddingProblem& p, const std::vector<double>& nodes, double tol) {
    auto gap = [&](double x) { return p.mu0.potential(x) - p.mu.potential(x); };
    auto set = embedding_interval(p.mu0, p.mu, nodes, tol);
    for (auto& j : set) {
        auto refine = [&](double outside, double inside) {
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (outside + inside);
                if (mid == outside || mid == inside) break;
                (gap(mid) > tol ? inside : outside) = mid;
            }
            return outside;
        };
        const auto lo_it = std::upper_bound(nodes.begin(), nodes.end(), j.lo);
        if (lo_it != nodes.end() && gap(j.lo) <= tol) j.lo = refine(j.lo, *lo_it);
        const auto hi_it = std::lower_bound(nodes.begin(), nodes.end(), j.hi);
        if (hi_it != nodes.begin() && gap(j.hi) <= tol) j.hi = refine(j.hi, *std::prev(hi_it));
    }
    return set;
}

std::vector<double> grid_nodes(const SolveGrid& g) {
    std::vector<double> xs(static_cast<std::size_t>(g.n_x));
    for (int j = 0; j < g.n_x; ++j) xs[static_cast<std::size_t>(j)] = g.x_min + (g.x_max - g.x_min) * j / (g.n_x - 1);
    return xs;
}

}  // namespace

DensityGate density_gate(const EmbeddingProblem& problem, const SolveGrid& grid) {
    if (problem.mu.has_atoms()) return {false, 0.0, "density gate: target has atoms"};
    const auto set = refined_embedding_set(problem, grid_nodes(grid), grid.embed_tol);
    if (set.empty()) return {false, 0.0, "density gate: embedding set is empty"};
    constexpr int kSamples = 4001;
    double k = kInf;
    double where = 0.0;
    for (const auto& j : set) {
        for (int i = 0; i < kSamples; ++i) {
            const double x = j.lo + (j.hi - j.lo) * (i + 0.5) / kSamples;
            const double d = problem.mu.density(x);
            if (d < k) {
                k = d;
                where = x;
            }
        }
    }
    if (!(k > 0.0)) {
        return {false, k,
                "density gate: target density is not bounded below on the embedding set (density " + fmt(k) +
                    " at x = " + fmt(where) + ")"};
    }
    return {true, k, ""};
}

VerificationReport theorem_suite(const EmbeddingProblem& problem, std::span<const SolveGrid> grids) {
    if (grids.empty()) throw InvalidArgument("theorem_suite: need at least one grid");
    const auto gate = density_gate(problem, grids.front());
    if (!gate.ok) throw HypothesisViolation(gate.reason);

    VerificationReport rep("theorem");
    rep.add({"density_gate", Outcome::pass, gate.k, 0.0, 0, 0, "min target density on the embedding set"});
    double prev = -1.0;
    for (std::size_t g = 0; g < grids.size(); ++g) {
        const auto& grid = grids[g];
        const std::string tag = std::to_string(grid.n_x) + "x" + std::to_string(grid.n_t);
        const auto res = solve(problem, grid);
        const auto& r = res.barrier;
        std::size_t inf_cells = 0;
        for (double v : r.cells()) inf_cells += std::isinf(v) ? 1 : 0;
        rep.add({"finite[" + tag + "]", inf_cells == 0 ? Outcome::pass : Outcome::fail,
                 static_cast<double>(inf_cells), 0.0, static_cast<std::int64_t>(r.n_cells()), 0,
                 "number of infinite cells"});
        const auto mod = continuity_modulus(r);
        Check c{"modulus[" + tag + "]", Outcome::pass, mod.max_jump, prev < 0.0 ? kInf : prev,
                static_cast<std::int64_t>(r.n_cells()), 0, "max adjacent jump at x = " + fmt(mod.location)};
        if (prev >= 0.0) {
            c.outcome = mod.max_jump <= prev * (1.0 + 1e-12) ? Outcome::pass : Outcome::fail;
            c.note += ", ratio to the coarser grid " + fmt(prev > 0.0 ? mod.max_jump / prev : 0.0);
        }
        if (!std::isfinite(mod.max_jump)) c.outcome = Outcome::fail;
        rep.add(std::move(c));
        prev = mod.max_jump;
    }
    return rep;
}

}  // namespace skorokhod
