// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "skorokhod/interval.hpp"

namespace skorokhod {

struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

/// Polynomial density on [lo, hi): sum_k coeffs[k] * (x - lo)^k, degree <= 3.
///
/// Coefficients are stored in the local coordinate so that pieces far from the
/// origin keep their conditioning.
struct DensityPiece {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> coeffs;

    [[nodiscard]] double width() const noexcept { return hi - lo; }
    [[nodiscard]] double density(double x) const noexcept;
    [[nodiscard]] double mass() const noexcept;
};

/// Finite measure on the line made of atoms and piecewise-polynomial densities.
///
/// Immutable after construction. The constructor validates nonnegativity,
/// disjointness of the pieces and agreement with the declared total mass.
/// Potentials are closed form, so convex-order comparisons carry no
/// quadrature error.
class Measure {
public:
    static constexpr int kMaxDegree = 3;
    static constexpr double kTotalTolerance = 1e-12;

    Measure() = default;
    Measure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces, double declared_total);

    /// Declared total is taken from the parts themselves.
    static Measure from_parts(std::vector<Atom> atoms, std::vector<DensityPiece> pieces);

    static Measure dirac(double location, double mass = 1.0);
    static Measure uniform(double a, double b);
    /// Gaussian law as a cubic Hermite spline on [mean - 8 sd, mean + 8 sd].
    static Measure gaussian(double mean, double variance);
    /// Two-triangle tent law on (a, b); see tent_density().
    static Measure tent(double a, double b, double lambda, double p);
    static Measure sum(std::span<const Measure> parts);

    [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    [[nodiscard]] const std::vector<DensityPiece>& pieces() const noexcept { return pieces_; }
    [[nodiscard]] double declared_total() const noexcept { return declared_total_; }
    [[nodiscard]] bool has_atoms() const noexcept { return !atoms_.empty(); }
    [[nodiscard]] bool empty() const noexcept { return atoms_.empty() && pieces_.empty(); }

    [[nodiscard]] double total_mass() const noexcept;
    [[nodiscard]] double first_moment() const noexcept;
    /// first_moment / total_mass; throws on a zero measure.
    [[nodiscard]] double mean() const;

    [[nodiscard]] double mass(const Interval& set) const noexcept;
    /// mass and first moment of the set
    [[nodiscard]] std::pair<double, double> mass_and_moment(const Interval& set) const noexcept;
    /// mass of (a, b)
    [[nodiscard]] double mass_open(double a, double b) const noexcept;
    /// mass of (-inf, x]
    [[nodiscard]] double cdf(double x) const noexcept;
    /// mass of (-inf, x)
    [[nodiscard]] double cdf_before(double x) const noexcept;
    [[nodiscard]] double density(double x) const noexcept;

    /// u(x) = -int |x - y| dm(y).
    [[nodiscard]] double potential(double x) const noexcept;
    [[nodiscard]] std::vector<double> potential(std::span<const double> xs) const;

    /// int (h - |y - c|)^+ dm(y). The second difference of the potential on a
    /// uniform grid of step h at c equals -2 times this value.
    [[nodiscard]] double hat_integral(double c, double h) const noexcept;

    /// Smallest closed interval holding all mass; nullopt for the zero measure.
    [[nodiscard]] std::optional<std::pair<double, double>> support_hull() const noexcept;

    /// Smallest x with cdf(x) >= u * total_mass, u in [0, 1].
    [[nodiscard]] double quantile(double u) const;

    /// Restriction to the open interval (a, b).
    [[nodiscard]] Measure restricted(double a, double b) const;
    [[nodiscard]] Measure scaled(double w) const;
    [[nodiscard]] Measure normalized() const;
    /// Push-forward under y = shift + scale * x, scale > 0.
    [[nodiscard]] Measure affine_image(double shift, double scale) const;

private:
    void index();

    std::vector<Atom> atoms_;
    std::vector<DensityPiece> pieces_;
    double declared_total_ = 0.0;

    std::vector<double> atom_cum_{0.0};   // atom_cum_[i] = mass of atoms_[0..i)
    std::vector<double> piece_cum_{0.0};  // piece_cum_[i] = mass of pieces_[0..i)
    std::vector<double> knots_;           // atom locations and piece ends, sorted
};

/// Potential function u_m(x) = -int |x - y| dm(y).
[[nodiscard]] inline double potential(const Measure& m, double x) noexcept { return m.potential(x); }

struct ConvexOrderResult {
    bool holds = false;
    /// Grid point of the largest violation when the order fails.
    std::optional<double> witness;
};

/// Checks u_{m0} >= u_{m1} - 1e-10 on the grid. Throws MeanMismatch when the
/// means differ by more than 1e-9.
[[nodiscard]] ConvexOrderResult convex_order(const Measure& m0, const Measure& m1,
                                             std::span<const double> grid);

/// Maximal open grid intervals on which u_{m0} - u_{m1} > tol. Each run of gap
/// nodes extends to the neighbouring no-gap nodes (or to the grid ends).
[[nodiscard]] IntervalSet embedding_interval(const Measure& m0, const Measure& m1,
                                             std::span<const double> grid, double tol);

/// Intervals from a precomputed potential gap sampled on grid.
[[nodiscard]] IntervalSet gap_intervals(std::span<const double> grid,
                                        std::span<const double> gap, double tol);

/// Tent density (1-lambda) 2(a+p-x)/p^2 [x<a+p] + lambda 2(x-b+p)/p^2 [x>b-p] on (a, b).
[[nodiscard]] double tent_density(double lambda, double p, double a, double b, double x);

struct TentCalibration {
    double lambda = 0.0;
    double p = 0.0;
};

/// Tent parameters on (a, b) whose law has mean c.
[[nodiscard]] TentCalibration calibrate_tent(double a, double b, double c);

/// Mean of the tent law with the given parameters.
[[nodiscard]] double tent_mean(double a, double b, double lambda, double p) noexcept;

/// eta = sum_j nu_j * xi_{c_j}: nu split into n_cells equal cells of (a, b),
/// each cell's mass moved onto the tent law calibrated to its barycenter.
[[nodiscard]] Measure mixture_measure(const Measure& nu, double a, double b, int n_cells = 64);

}  // namespace skorokhod
