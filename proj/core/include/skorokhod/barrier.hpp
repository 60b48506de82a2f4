// SPDX-License-Identifier: MIT
#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skorokhod/interval.hpp"

namespace skorokhod {

/// Sentinel for "never stops here". Compares greater than any finite time.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Lower semi-continuous barrier r on a grid x_0 < ... < x_N.
///
/// On each open cell (x_i, x_{i+1}) r takes the cell value. At a grid point r
/// takes the minimum of the stored point value and both adjacent cell values,
/// which makes r lower semi-continuous by construction. Outside [x_0, x_N] and
/// at the two ends r is 0 (the r(+-inf) = 0 convention). Values lie in
/// [0, t_cap] or are kInf.
class Barrier {
public:
    Barrier() = default;
    Barrier(std::vector<double> grid, std::vector<double> cells, std::vector<double> points, double t_cap);

    static Barrier constant(std::vector<double> grid, double value, double t_cap);
    /// Node-sampled barrier: points take the node values, each cell the larger
    /// of its two end values, so eval at a node returns the node value.
    static Barrier from_nodes(std::vector<double> grid, std::vector<double> node_values, double t_cap);

    [[nodiscard]] const std::vector<double>& grid() const noexcept { return grid_; }
    [[nodiscard]] const std::vector<double>& cells() const noexcept { return cells_; }
    [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
    [[nodiscard]] double t_cap() const noexcept { return t_cap_; }
    [[nodiscard]] double lo() const noexcept { return grid_.front(); }
    [[nodiscard]] double hi() const noexcept { return grid_.back(); }
    [[nodiscard]] std::size_t n_cells() const noexcept { return cells_.size(); }
    [[nodiscard]] bool has_inf_cells() const noexcept;

    [[nodiscard]] double eval(double x) const noexcept;
    /// eval at grid point i
    [[nodiscard]] double eval_point(std::size_t i) const noexcept;
    /// Infimum of eval over the set.
    [[nodiscard]] double infimum_on(const Interval& set) const noexcept;

    /// Barrier of the image under x' = shift + scale * x and t' = t_scale * t.
    [[nodiscard]] Barrier rescaled(double shift, double scale, double t_scale) const;

private:
    /// index i with grid[i] <= x < grid[i+1]; requires lo() <= x < hi()
    [[nodiscard]] std::size_t locate(double x) const noexcept;

    std::vector<double> grid_{0.0, 1.0};
    std::vector<double> cells_{0.0};
    std::vector<double> points_{0.0, 0.0};
    double t_cap_ = 0.0;
    double uniform_step_ = 0.0;  // > 0 when the grid is uniform
};

[[nodiscard]] inline double eval(const Barrier& r, double x) noexcept { return r.eval(x); }

/// Maximal intervals (within the grid span) on which eval(r, .) >= t.
[[nodiscard]] IntervalSet region_at_least(const Barrier& r, double t);

/// Zero outside the intervals, unchanged inside. Interval ends that are not
/// grid points are inserted into the grid.
[[nodiscard]] Barrier regularize(const Barrier& r, const IntervalSet& keep);

struct BarrierPiece {
    Interval where;  // open interval on which the piece applies
    Barrier barrier;
};

/// base_level everywhere on span, base_level + piece value inside each piece
/// interval. The grid is the union of the span ends, the piece ends and the
/// piece grid points inside each piece; nothing is resampled.
[[nodiscard]] Barrier paste_barriers(double base_level, std::span<const BarrierPiece> pieces,
                                     std::optional<std::pair<double, double>> span = std::nullopt);

struct ContinuityModulus {
    double max_jump = 0.0;
    double location = 0.0;
};

/// Largest jump between adjacent cells. A finite/kInf junction yields kInf at
/// the first such junction.
[[nodiscard]] ContinuityModulus continuity_modulus(const Barrier& r);

/// Shortest decimal text that round-trips the double; "inf" for kInf.
[[nodiscard]] std::string format_number(double value);
/// Parses format_number output (and ordinary decimal text). Throws InvalidArgument.
[[nodiscard]] double parse_number(std::string_view text);

/// Writes `x,r` rows: grid points interleaved with cell midpoints carrying the
/// cell values. Comment lines start with '#'.
void write_barrier_csv(std::ostream& out, const Barrier& r, std::span<const std::string> comments = {});
/// Reads write_barrier_csv output. t_cap comes from a `# ... t_cap=<v>` comment
/// when present, else from the largest finite value.
[[nodiscard]] Barrier read_barrier_csv(std::istream& in);

}  // namespace skorokhod
