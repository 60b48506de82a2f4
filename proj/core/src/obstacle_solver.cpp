// SPDX-License-Identifier: MIT
#include "skorokhod/obstacle_solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "skorokhod/errors.hpp"

namespace skorokhod {

void SolveGrid::validate() const {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
        throw InvalidArgument("solve grid: need finite x_min < x_max");
    if (n_x < 16 || n_t < 16) throw InvalidArgument("solve grid: n_x and n_t must be >= 16");
    if (!(t_cap > 0.0) || !std::isfinite(t_cap)) throw InvalidArgument("solve grid: t_cap must be finite, > 0");
    if (!(theta >= 0.5 && theta <= 1.0)) throw InvalidArgument("solve grid: theta must lie in [1/2, 1]");
    if (!(psor_tol > 0.0)) throw InvalidArgument("solve grid: psor_tol must be > 0");
    if (psor_max_iters < 1) throw InvalidArgument("solve grid: psor_max_iters must be >= 1");
    if (!(omega > 0.0 && omega < 2.0)) throw InvalidArgument("solve grid: omega must lie in (0, 2)");
    if (!(contact_tol >= 0.0)) throw InvalidArgument("solve grid: contact_tol must be >= 0");
    if (!(embed_tol >= 0.0)) throw InvalidArgument("solve grid: embed_tol must be >= 0");
}

std::vector<double> ValueSurface::u_row(std::size_t n) const {
    std::vector<double> row(n_x());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = u(n, j);
    return row;
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, int n) {
    // lo + (hi - lo) j / (n - 1) keeps dyadic and decimal nodes exact
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(j)] = lo + (hi - lo) * j / (n - 1);
    g.back() = hi;
    return g;
}

std::string describe(double x) {
    std::ostringstream s;
    s.precision(10);
    s << x;
    return s.str();
}

/// One implicit step of the linear complementarity problem
///   A v - rhs >= 0, v >= 0, v (A v - rhs) = 0
/// with A = tridiag(-off, diag, -off) on interior nodes and v = 0 at both ends.
class StepSolver {
public:
    explicit StepSolver(std::size_t n) : c_(n), d_(n), active_(n, 0) {}

    /// Solves into v (holding the previous slice on entry). Returns the sweep
    /// count, or -1 when the residual bound is not met.
    int solve(std::span<double> v, std::span<const double> diag, std::span<const double> off,
              std::span<const double> rhs, double dt, double tol, int max_iters, double omega) {
        const std::size_t n = v.size();
        for (std::size_t j = 1; j + 1 < n; ++j) active_[j] = v[j] == 0.0 ? 1 : 0;

        // active-set predictor: exact on a stable contact set
        for (int it = 0; it < 64; ++it) {
            thomas(v, diag, off, rhs);
            bool changed = false;
            for (std::size_t j = 1; j + 1 < n; ++j) {
                if (active_[j]) {
                    if (row(v, diag, off, rhs, j) < 0.0) {
                        active_[j] = 0;
                        changed = true;
                    }
                } else if (v[j] < 0.0) {
                    active_[j] = 1;
                    changed = true;
                }
            }
            if (!changed) break;
        }
        for (std::size_t j = 1; j + 1 < n; ++j) v[j] = std::max(0.0, v[j]);

        // projected SOR corrector
        for (int sweep = 0; sweep <= max_iters; ++sweep) {
            if (residual(v, diag, off, rhs, dt) <= tol) return sweep;
            for (std::size_t j = 1; j + 1 < n; ++j) {
                const double gs = (rhs[j] + off[j] * (v[j - 1] + v[j + 1])) / diag[j];
                v[j] = std::max(0.0, (1.0 - omega) * v[j] + omega * gs);
            }
        }
        return -1;
    }

    /// max over interior nodes of |min((A v - rhs) / dt, v)|
    static double residual(std::span<const double> v, std::span<const double> diag, std::span<const double> off,
                           std::span<const double> rhs, double dt) {
        double worst = 0.0;
        for (std::size_t j = 1; j + 1 < v.size(); ++j) {
            worst = std::max(worst, std::abs(std::min(row(v, diag, off, rhs, j) / dt, v[j])));
        }
        return worst;
    }

private:
    static double row(std::span<const double> v, std::span<const double> diag, std::span<const double> off,
                      std::span<const double> rhs, std::size_t j) {
        return diag[j] * v[j] - off[j] * (v[j - 1] + v[j + 1]) - rhs[j];
    }

    /// Solves the linear system with rows of active nodes replaced by v_j = 0.
    void thomas(std::span<double> v, std::span<const double> diag, std::span<const double> off,
                std::span<const double> rhs) {
        const std::size_t n = v.size();
        // forward elimination over interior nodes 1..n-2; ends are fixed at 0
        double c_prev = 0.0;
        double d_prev = 0.0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double a = active_[j] ? 0.0 : -off[j];
            const double b = active_[j] ? 1.0 : diag[j];
            const double c = active_[j] ? 0.0 : -off[j];
            const double r = active_[j] ? 0.0 : rhs[j];
            const double denom = b - a * c_prev;
            c_[j] = c / denom;
            d_[j] = (r - a * d_prev) / denom;
            c_prev = c_[j];
            d_prev = d_[j];
        }
        v[0] = 0.0;
        v[n - 1] = 0.0;
        double next = 0.0;
        for (std::size_t j = n - 2; j >= 1; --j) {
            v[j] = d_[j] - c_[j] * next;
            if (active_[j]) v[j] = 0.0;
            next = v[j];
        }
    }

    std::vector<double> c_;
    std::vector<double> d_;
    std::vector<std::uint8_t> active_;
};

}  // namespace

SolveResult solve(const EmbeddingProblem& problem, const SolveGrid& grid_in) {
    grid_in.validate();
    SolveGrid grid = grid_in;
    const auto& mu0 = problem.mu0;
    const auto& mu = problem.mu;
    const auto& sde = problem.diffusion;
    std::vector<std::string> notes;

    if (mu0.empty() || mu.empty()) throw InvalidArgument("solve: initial and target laws must be nonzero");
    if (std::abs(mu0.total_mass() - mu.total_mass()) > 1e-12 * std::max(1.0, mu.total_mass()))
        throw InvalidArgument("solve: initial and target laws must have equal mass");
    // first moments: same rule as convex_order, checked before any widening
    if (std::abs(mu0.mean() - mu.mean()) > 1e-9) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "solve: means differ (" << mu0.mean() << " vs " << mu.mean() << ")";
        throw MeanMismatch(msg.str());
    }

    // restrict to the domain; the edges act as absorbing boundaries
    const Domain& dom = sde.domain();
    if (grid.x_min < dom.lo) {
        grid.x_min = dom.lo;
        notes.push_back("x_min clipped to the domain edge " + describe(dom.lo));
    }
    if (grid.x_max > dom.hi) {
        grid.x_max = dom.hi;
        notes.push_back("x_max clipped to the domain edge " + describe(dom.hi));
    }

    auto edge_gap = [&](double x) { return mu0.potential(x) - mu.potential(x); };
    if (edge_gap(grid.x_min) > grid.embed_tol || edge_gap(grid.x_max) > grid.embed_tol) {
        if (!grid.auto_widen)
            throw InvalidArgument("solve: the x-range must extend past the supports (edge gap is not zero)");
        const auto h0 = mu0.support_hull();
        const auto h1 = mu.support_hull();
        const double lo = std::min({grid.x_min, h0->first, h1->first});
        const double hi = std::max({grid.x_max, h0->second, h1->second});
        const double pad = 0.02 * (hi - lo);
        grid.x_min = std::max(lo - pad, dom.lo);
        grid.x_max = std::min(hi + pad, dom.hi);
        notes.push_back("x-range widened to [" + describe(grid.x_min) + ", " + describe(grid.x_max) +
                        "] to cover the supports");
        if (edge_gap(grid.x_min) > grid.embed_tol || edge_gap(grid.x_max) > grid.embed_tol)
            throw InvalidArgument("solve: edge gap stays positive after widening to the supports");
    }

    const auto xs = uniform_grid(grid.x_min, grid.x_max, grid.n_x);
    const auto order = convex_order(mu0, mu, xs);
    if (!order.holds) {
        std::ostringstream msg;
        msg << "solve: initial and target laws are not in convex order (u_mu0 < u_mu at x = "
            << describe(order.witness.value_or(0.0)) << ")";
        throw ConvexOrderViolation(msg.str());
    }

    const std::size_t nx = xs.size();
    const double h = (grid.x_max - grid.x_min) / (grid.n_x - 1);
    const double dt = grid.dt();
    const auto nt = static_cast<std::size_t>(grid.n_t);

    // sigma must stay away from zero on the interior nodes
    double sigma_min = kInf;
    for (std::size_t j = 1; j + 1 < nx; ++j) {
        for (double t : {0.0, 0.5 * grid.t_cap, grid.t_cap}) sigma_min = std::min(sigma_min, std::abs(sde.sigma(t, xs[j])));
    }
    if (!(sigma_min > 0.0))
        throw HypothesisViolation("solve: sigma vanishes inside the grid; the lower-bound condition fails");

    ValueSurface surf;
    surf.x_grid = xs;
    surf.t_grid.resize(nt + 1);
    for (std::size_t n = 0; n <= nt; ++n) surf.t_grid[n] = grid.t_cap * static_cast<double>(n) / static_cast<double>(nt);
    surf.obstacle = mu.potential(xs);
    for (const auto& a : mu.atoms()) surf.kinks.push_back(a.location);
    surf.diffusion = sde;
    surf.theta = grid.theta;
    surf.embed_tol = grid.embed_tol;
    surf.gap.assign((nt + 1) * nx, 0.0);

    const auto u0 = mu0.potential(xs);
    for (std::size_t j = 1; j + 1 < nx; ++j) {
        const double g = u0[j] - surf.obstacle[j];
        surf.gap[j] = g > grid.embed_tol ? g : 0.0;
    }

    // source: sigma^2/2 times the exact second difference of u_mu
    std::vector<double> hat(nx, 0.0);
    for (std::size_t j = 1; j + 1 < nx; ++j) hat[j] = mu.hat_integral(xs[j], h);

    const double theta = grid.theta;
    std::vector<double> sig2_prev(nx);
    std::vector<double> sig2(nx);
    auto fill_sigma = [&](std::vector<double>& s2, double t) {
        for (std::size_t j = 0; j < nx; ++j) {
            const double s = sde.sigma(t, xs[j]);
            s2[j] = s * s;
        }
    };
    fill_sigma(sig2_prev, 0.0);
    sig2 = sig2_prev;

    std::vector<double> diag(nx, 1.0);
    std::vector<double> off(nx, 0.0);
    std::vector<double> rhs(nx, 0.0);
    std::vector<double> v(nx);
    StepSolver step(nx);
    const double lam = dt / (h * h);
    for (std::size_t n = 1; n <= nt; ++n) {
        const double t1 = surf.t_grid[n];
        if (!sde.time_homogeneous()) fill_sigma(sig2, t1);
        const double* prev = &surf.gap[(n - 1) * nx];
        for (std::size_t j = 1; j + 1 < nx; ++j) {
            const double a1 = 0.5 * sig2[j] * lam;
            const double a0 = 0.5 * sig2_prev[j] * lam;
            diag[j] = 1.0 + 2.0 * theta * a1;
            off[j] = theta * a1;
            const double src = -(theta * sig2[j] + (1.0 - theta) * sig2_prev[j]) * hat[j] / (h * h);
            rhs[j] = prev[j] + (1.0 - theta) * a0 * (prev[j - 1] - 2.0 * prev[j] + prev[j + 1]) + dt * src;
        }
        std::copy(prev, prev + nx, v.begin());
        double omega = grid.omega;
        int sweeps = step.solve(v, diag, off, rhs, dt, grid.psor_tol, grid.psor_max_iters, omega);
        if (sweeps < 0) {
            omega *= 0.5;
            std::copy(prev, prev + nx, v.begin());
            sweeps = step.solve(v, diag, off, rhs, dt, grid.psor_tol, grid.psor_max_iters, omega);
        }
        if (sweeps < 0) {
            std::ostringstream msg;
            msg << "solve: projected SOR did not converge at time index " << n << " (t = " << t1
                << "), residual " << StepSolver::residual(v, diag, off, rhs, dt);
            throw NumericalError(msg.str());
        }
        std::copy(v.begin(), v.end(), surf.gap.begin() + static_cast<std::ptrdiff_t>(n * nx));
        if (!sde.time_homogeneous()) sig2_prev = sig2;
    }

    SolveResult out;
    out.barrier = extract_barrier(surf, grid.contact_tol, std::max(1e-8, 10.0 * grid.psor_tol));
    out.surface = std::move(surf);
    out.grid = grid;
    out.notes = std::move(notes);
    return out;
}

Barrier extract_barrier(const ValueSurface& surf, double contact_tol, double monotone_tol) {
    const std::size_t nx = surf.n_x();
    const std::size_t rows = surf.n_rows();
    if (nx < 2 || rows < 1 || surf.gap.size() != nx * rows || surf.obstacle.size() != nx)
        throw InvalidArgument("extract_barrier: inconsistent surface");
    const double leave = std::max(contact_tol, monotone_tol);
    std::vector<double> r(nx, kInf);
    for (std::size_t j = 0; j < nx; ++j) {
        for (std::size_t n = 0; n < rows; ++n) {
            if (surf.gap_at(n, j) <= contact_tol) {
                r[j] = surf.t_grid[n];
                for (std::size_t m = n + 1; m < rows; ++m) {
                    if (surf.gap_at(m, j) > leave) {
                        std::ostringstream msg;
                        msg << "extract_barrier: node x = " << surf.x_grid[j] << " leaves contact at t = "
                            << surf.t_grid[m] << " (gap " << surf.gap_at(m, j) << ")";
                        throw NumericalError(msg.str());
                    }
                }
                break;
            }
        }
    }
    const double t_cap = surf.t_grid.back();
    const std::vector<double> gap0(surf.gap.begin(), surf.gap.begin() + static_cast<std::ptrdiff_t>(nx));
    const auto keep = gap_intervals(surf.x_grid, gap0, surf.embed_tol);
    return regularize(Barrier::from_nodes(surf.x_grid, std::move(r), t_cap), keep);
}

ResidualReport residual_report(const ValueSurface& surf) {
    ResidualReport rep;
    const std::size_t nx = surf.n_x();
    const std::size_t rows = surf.n_rows();
    rep.n_steps = rows > 0 ? rows - 1 : 0;
    if (nx < 3) return rep;
    const double h = surf.x_grid[1] - surf.x_grid[0];
    std::vector<std::uint8_t> kink(nx, 0);
    for (double a : surf.kinks) {
        for (std::size_t j = 0; j < nx; ++j) {
            if (std::abs(surf.x_grid[j] - a) < h * (1.0 + 1e-9)) {
                kink[j] = 1;
                rep.kink_nodes.push_back(surf.x_grid[j]);
            }
        }
    }
    if (rows < 2) return rep;

    auto lap = [&](std::size_t n, std::size_t j) {
        return (surf.u(n, j - 1) - 2.0 * surf.u(n, j) + surf.u(n, j + 1)) / (h * h);
    };
    const double theta = surf.theta;
    for (std::size_t n = 1; n < rows; ++n) {
        const double dt = surf.t_grid[n] - surf.t_grid[n - 1];
        const double t0 = surf.t_grid[n - 1];
        const double t1 = surf.t_grid[n];
        for (std::size_t j = 1; j + 1 < nx; ++j) {
            const double x = surf.x_grid[j];
            const double s1 = surf.diffusion.sigma(t1, x);
            const double s0 = surf.diffusion.sigma(t0, x);
            const double pde = (surf.gap_at(n, j) - surf.gap_at(n - 1, j)) / dt -
                               theta * 0.5 * s1 * s1 * lap(n, j) - (1.0 - theta) * 0.5 * s0 * s0 * lap(n - 1, j);
            const double res = std::abs(std::min(pde, surf.gap_at(n, j)));
            if (kink[j]) {
                rep.max_kink_residual = std::max(rep.max_kink_residual, res);
            } else if (res > rep.max_residual) {
                rep.max_residual = res;
                rep.at_x = x;
                rep.at_t = t1;
            }
        }
    }
    return rep;
}

void write_surface_csv(std::ostream& out, const ValueSurface& surf, std::span<const std::string> comments,
                       std::size_t stride) {
    if (stride == 0) stride = 1;
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "t,x,u\n";
    for (std::size_t n = 0; n < surf.n_rows(); n += stride) {
        for (std::size_t j = 0; j < surf.n_x(); ++j) {
            out << format_number(surf.t_grid[n]) << ',' << format_number(surf.x_grid[j]) << ','
                << format_number(surf.u(n, j)) << '\n';
        }
    }
}

}  // namespace skorokhod
