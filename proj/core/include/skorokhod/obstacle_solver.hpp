// SPDX-License-Identifier: MIT
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skorokhod/barrier.hpp"
#include "skorokhod/diffusion.hpp"
#include "skorokhod/measure.hpp"

namespace skorokhod {

struct SolveGrid {
    double x_min = -8.0;
    double x_max = 8.0;
    int n_x = 600;
    double t_cap = 2.0;
    int n_t = 600;
    /// 1 is fully implicit, 1/2 Crank-Nicolson
    double theta = 1.0;
    /// bound on the complementarity residual accepted per time step
    double psor_tol = 1e-9;
    int psor_max_iters = 20000;
    double omega = 1.5;
    /// gap at or below which a node counts as in contact
    double contact_tol = 0.0;
    /// gap above which a node belongs to the embedding set at t = 0
    double embed_tol = 1e-10;
    /// widen [x_min, x_max] to the support hulls when the edge gap is not zero
    bool auto_widen = true;

    [[nodiscard]] double dt() const noexcept { return t_cap / n_t; }
    [[nodiscard]] double dx() const noexcept { return (x_max - x_min) / (n_x - 1); }
    /// Throws InvalidArgument on sizes < 16, theta outside [1/2, 1] or bad tolerances.
    void validate() const;
};

/// Initial law mu0, target law mu and the driving diffusion.
struct EmbeddingProblem {
    Measure mu0;
    Measure mu;
    DiffusionSpec diffusion;
};

/// Solution of the obstacle problem on the space-time grid.
///
/// Stores the gap u - u_mu rather than u itself: the gap is exactly zero on
/// the contact set, which keeps the first-contact times sharp where the gap
/// decays exponentially.
struct ValueSurface {
    std::vector<double> x_grid;
    /// t_grid[0] = 0, t_grid.back() = t_cap
    std::vector<double> t_grid;
    /// gap(n, j) = gap[n * x_grid.size() + j] >= 0
    std::vector<double> gap;
    /// u_mu on x_grid
    std::vector<double> obstacle;
    /// atom locations of the target, where u_mu has kinks
    std::vector<double> kinks;
    DiffusionSpec diffusion;
    double theta = 1.0;
    double embed_tol = 1e-10;

    [[nodiscard]] std::size_t n_x() const noexcept { return x_grid.size(); }
    [[nodiscard]] std::size_t n_rows() const noexcept { return t_grid.size(); }
    [[nodiscard]] double gap_at(std::size_t n, std::size_t j) const noexcept { return gap[n * x_grid.size() + j]; }
    [[nodiscard]] double u(std::size_t n, std::size_t j) const noexcept { return obstacle[j] + gap_at(n, j); }
    [[nodiscard]] std::vector<double> u_row(std::size_t n) const;
};

struct SolveResult {
    Barrier barrier;
    ValueSurface surface;
    /// the grid actually used (after widening or clipping to the domain)
    SolveGrid grid;
    std::vector<std::string> notes;
};

/// Time-steps min(d_t u - sigma^2/2 d_xx u, u - u_mu) = 0 from u(0) = u_mu0
/// with the edges pinned to u_mu, then extracts the barrier.
///
/// Throws MeanMismatch / ConvexOrderViolation before stepping, HypothesisViolation
/// when sigma vanishes inside the grid, NumericalError when a step does not
/// converge (the message names the time index).
[[nodiscard]] SolveResult solve(const EmbeddingProblem& problem, const SolveGrid& grid);

/// r(x_j) = first t_n with gap <= contact_tol, kInf if none, regularized to
/// zero outside the t = 0 gap set. Throws NumericalError when a node leaves
/// contact by more than monotone_tol.
[[nodiscard]] Barrier extract_barrier(const ValueSurface& surf, double contact_tol = 0.0,
                                      double monotone_tol = 1e-8);

struct ResidualReport {
    /// max |min(d_t u - L u, u - u_mu)| over interior nodes away from kinks
    double max_residual = 0.0;
    double at_x = 0.0;
    double at_t = 0.0;
    /// same quantity over the kink nodes (grid neighbours of target atoms)
    double max_kink_residual = 0.0;
    std::vector<double> kink_nodes;
    std::size_t n_steps = 0;
};

[[nodiscard]] ResidualReport residual_report(const ValueSurface& surf);

/// `t,x,u` rows, every `stride`-th time row.
void write_surface_csv(std::ostream& out, const ValueSurface& surf, std::span<const std::string> comments = {},
                       std::size_t stride = 1);

}  // namespace skorokhod
