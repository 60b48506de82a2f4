// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "skorokhod/errors.hpp"
#include "skorokhod/verify.hpp"

namespace skorokhod {

namespace {

/// Rethrows the active exception with a prefix, keeping its category.
[[noreturn]] void rethrow_with_prefix(const std::string& prefix) {
    try {
        throw;
    } catch (const ConvexOrderViolation& e) {
        throw ConvexOrderViolation(prefix + e.what());
    } catch (const MeanMismatch& e) {
        throw MeanMismatch(prefix + e.what());
    } catch (const HypothesisViolation& e) {
        throw HypothesisViolation(prefix + e.what());
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(prefix + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const std::exception& e) {
        throw NumericalError(prefix + e.what());
    }
}

}  // namespace

SolveGrid counterexample_grid() {
    SolveGrid g;
    g.x_min = -0.25;
    g.x_max = 1.25;
    g.n_x = 601;
    g.t_cap = 3.0;
    g.n_t = 600;
    return g;
}

namespace {

void check_counterexample_args(double x, int n_intervals) {
    if (n_intervals < 3) throw InvalidArgument("counterexample: n_intervals must be >= 3");
    if (n_intervals > 40) throw InvalidArgument("counterexample: n_intervals must be <= 40");
    if (!std::isfinite(x)) throw InvalidArgument("counterexample: x must be finite");
}

std::vector<double> dyadic_points(double x, std::size_t n) {
    std::vector<double> pts(n + 1);
    for (std::size_t i = 0; i <= n; ++i) pts[i] = x + std::ldexp(1.0, -static_cast<int>(i));
    return pts;
}

Measure assemble_target(const std::vector<Measure>& etas, const std::vector<double>& points) {
    const Measure phi = Measure::gaussian(0.0, 1.0);
    std::vector<Measure> parts = etas;
    parts.push_back(phi.restricted(-kInf, points.back()));
    parts.push_back(phi.restricted(points.front(), kInf));
    return Measure::sum(parts);
}

}  // namespace

Measure counterexample_measure(double x, int n_intervals, int mixture_cells) {
    check_counterexample_args(x, n_intervals);
    const auto points = dyadic_points(x, static_cast<std::size_t>(n_intervals));
    const Measure phi = Measure::gaussian(0.0, 1.0);
    std::vector<Measure> etas;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        etas.push_back(mixture_measure(phi.restricted(points[i + 1], points[i]), points[i + 1], points[i], mixture_cells));
    }
    return assemble_target(etas, points);
}

CounterexampleResult build_counterexample(double x, int n_intervals, const SolveGrid& grid, int mixture_cells) {
    check_counterexample_args(x, n_intervals);
    grid.validate();
    const auto n = static_cast<std::size_t>(n_intervals);

    CounterexampleResult out;
    out.points = dyadic_points(x, n);

    const Measure phi = Measure::gaussian(0.0, 1.0);
    std::vector<Measure> nus(n);
    std::vector<Measure> etas(n);
    std::vector<Barrier> sub(n);
    out.time_steps.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = out.points[i + 1];
        const double b = out.points[i];
        nus[i] = phi.restricted(a, b);
        etas[i] = mixture_measure(nus[i], a, b, mixture_cells);
        out.time_steps[i] = grid.dt() * (b - a) * (b - a);
    }

    // each interval is solved in unit coordinates and mapped back by Brownian scaling
    detail::parallel_for(n, default_thread_count(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double a = out.points[i + 1];
            const double w = out.points[i] - a;
            try {
                EmbeddingProblem p{nus[i].normalized().affine_image(-a / w, 1.0 / w),
                                   etas[i].normalized().affine_image(-a / w, 1.0 / w), DiffusionSpec::brownian()};
                const auto res = solve(p, grid);
                sub[i] = res.barrier.rescaled(a, w, w * w);
            } catch (...) {
                rethrow_with_prefix("counterexample interval " + std::to_string(i + 1) + ": ");
            }
        }
    });

    std::vector<BarrierPiece> pieces;
    for (std::size_t i = 0; i < n; ++i) pieces.push_back({Interval{out.points[i + 1], out.points[i]}, sub[i]});
    constexpr double kBase = 1.0;
    constexpr double kSpan = 8.0;
    out.barrier = paste_barriers(kBase, pieces, std::pair{x - kSpan, x + kSpan});

    out.mu = assemble_target(etas, out.points);

    VerificationReport& rep = out.report;
    rep = VerificationReport("counterexample");
    const double tol = 2.0 * *std::max_element(out.time_steps.begin(), out.time_steps.end());

    {
        double worst = 0.0;
        std::ostringstream note;
        for (std::size_t i = 0; i <= n; ++i) {
            const double v = out.barrier.eval(out.points[i]);
            worst = std::max(worst, std::abs(v - kBase));
            note << (i ? " " : "") << "r(x_" << i + 1 << ")=" << format_number(v);
        }
        rep.add({"a_r_at_points", worst <= tol ? Outcome::pass : Outcome::fail, worst, tol,
                 static_cast<std::int64_t>(n + 1), 0, note.str()});
    }
    {
        std::size_t finite = 0;
        std::ostringstream note;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = out.barrier.eval(0.5 * (out.points[i] + out.points[i + 1]));
            finite += std::isinf(v) ? 0 : 1;
            note << (i ? " " : "") << format_number(v);
        }
        rep.add({"b_r_at_midpoints_infinite", finite == 0 ? Outcome::pass : Outcome::fail,
                 static_cast<double>(finite), 0.0, static_cast<std::int64_t>(n), 0, "r at midpoints: " + note.str()});
    }
    {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = out.points[i + 1];
            const double hi = out.points[i];
            total += out.mu.mass_open((3.0 * lo + hi) / 4.0, (lo + 3.0 * hi) / 4.0);
        }
        rep.add({"c_middle_half_mass_zero", total == 0.0 ? Outcome::pass : Outcome::fail, total, 0.0,
                 static_cast<std::int64_t>(n), 0, "exact mass of the middle halves"});
    }
    {
        const bool ok = !out.mu.has_atoms() && !out.mu.pieces().empty();
        rep.add({"d_atom_free_density", ok ? Outcome::pass : Outcome::fail,
                 static_cast<double>(out.mu.atoms().size()), 0.0, 0, 0,
                 std::to_string(out.mu.pieces().size()) + " density pieces"});
    }
    {
        const auto mod = continuity_modulus(out.barrier);
        rep.add({"continuity_modulus_infinite", std::isinf(mod.max_jump) ? Outcome::pass : Outcome::fail,
                 mod.max_jump, kInf, static_cast<std::int64_t>(out.barrier.n_cells()), 0,
                 "first infinite jump at x = " + format_number(mod.location)});
    }
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mid = 0.5 * (out.points[i] + out.points[i + 1]);
            const double quarter = 0.25 * (out.points[i] - out.points[i + 1]);
            std::vector<double> eps;
            std::vector<double> ys;
            for (int k = 0; k < 12; ++k) {
                eps.push_back(quarter * std::ldexp(0.999, -k));
                ys.push_back(mid);
            }
            for (double v : density_ratio_scan_sym(out.mu, mid, eps, ys)) worst = std::max(worst, v);
        }
        rep.add({"midpoint_density_ratios_zero", worst == 0.0 ? Outcome::pass : Outcome::fail, worst, 0.0,
                 static_cast<std::int64_t>(12 * n), 0, "symmetric scans at the midpoints"});
    }
    return out;
}

}  // namespace skorokhod
