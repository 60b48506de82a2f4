// SPDX-License-Identifier: MIT
#include "skorokhod/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skorokhod/errors.hpp"

namespace skorokhod {

namespace {

bool valid_value(double v) { return v >= 0.0 && !std::isnan(v); }

}  // namespace

Barrier::Barrier(std::vector<double> grid, std::vector<double> cells, std::vector<double> points, double t_cap)
    : grid_(std::move(grid)), cells_(std::move(cells)), points_(std::move(points)), t_cap_(t_cap) {
    if (grid_.size() < 2) throw InvalidArgument("barrier: grid needs at least two points");
    if (cells_.size() + 1 != grid_.size() || points_.size() != grid_.size())
        throw InvalidArgument("barrier: need one value per cell and one per grid point");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i])) throw InvalidArgument("barrier: non-finite grid point");
        if (i > 0 && !(grid_[i] > grid_[i - 1])) throw InvalidArgument("barrier: grid must increase strictly");
    }
    if (!(t_cap_ >= 0.0) || !std::isfinite(t_cap_)) throw InvalidArgument("barrier: t_cap must be finite, >= 0");
    const double cap = t_cap_ * (1.0 + 1e-12) + 1e-300;
    auto check = [&](double v) {
        if (!valid_value(v)) throw InvalidArgument("barrier: values must be >= 0 or inf");
        if (std::isfinite(v) && v > cap) {
            std::ostringstream msg;
            msg << "barrier: value " << v << " exceeds t_cap " << t_cap_;
            throw InvalidArgument(msg.str());
        }
    };
    std::for_each(cells_.begin(), cells_.end(), check);
    std::for_each(points_.begin(), points_.end(), check);
    points_.front() = 0.0;
    points_.back() = 0.0;

    const double h = (grid_.back() - grid_.front()) / static_cast<double>(cells_.size());
    bool uniform = true;
    for (std::size_t i = 1; i < grid_.size() && uniform; ++i) {
        uniform = std::abs((grid_[i] - grid_[i - 1]) - h) <= 1e-9 * h;
    }
    uniform_step_ = uniform ? h : 0.0;
}

Barrier Barrier::constant(std::vector<double> grid, double value, double t_cap) {
    const std::size_t n = grid.size();
    return Barrier(std::move(grid), std::vector<double>(n > 0 ? n - 1 : 0, value), std::vector<double>(n, value),
                   t_cap);
}

Barrier Barrier::from_nodes(std::vector<double> grid, std::vector<double> node_values, double t_cap) {
    if (node_values.size() != grid.size()) throw InvalidArgument("barrier: one value per node");
    std::vector<double> cells(grid.size() > 0 ? grid.size() - 1 : 0);
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = std::max(node_values[i], node_values[i + 1]);
    return Barrier(std::move(grid), std::move(cells), std::move(node_values), t_cap);
}

bool Barrier::has_inf_cells() const noexcept {
    return std::any_of(cells_.begin(), cells_.end(), [](double v) { return std::isinf(v); });
}

std::size_t Barrier::locate(double x) const noexcept {
    const std::size_t last = cells_.size() - 1;
    if (uniform_step_ > 0.0) {
        auto i = static_cast<std::size_t>(std::min<double>(static_cast<double>(last), (x - grid_[0]) / uniform_step_));
        while (i > 0 && x < grid_[i]) --i;
        while (i < last && x >= grid_[i + 1]) ++i;
        return i;
    }
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    return std::min(last, static_cast<std::size_t>(it - grid_.begin()) - 1);
}

double Barrier::eval_point(std::size_t i) const noexcept {
    if (i == 0 || i + 1 >= grid_.size()) return 0.0;
    return std::min({points_[i], cells_[i - 1], cells_[i]});
}

double Barrier::eval(double x) const noexcept {
    if (!(x > grid_.front() && x < grid_.back())) return 0.0;
    const std::size_t i = locate(x);
    if (x == grid_[i]) return eval_point(i);
    return cells_[i];
}

double Barrier::infimum_on(const Interval& set) const noexcept {
    if (set.empty()) return kInf;
    if (set.lo < grid_.front() || set.hi > grid_.back()) return 0.0;
    if ((set.lo_closed && set.lo == grid_.front()) || (set.hi_closed && set.hi == grid_.back())) return 0.0;
    double inf = kInf;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (set.contains(grid_[i])) inf = std::min(inf, eval_point(i));
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        // open cell meets the set iff their interiors overlap
        if (grid_[i] < set.hi && grid_[i + 1] > set.lo) inf = std::min(inf, cells_[i]);
    }
    if (set.lo == set.hi) inf = eval(set.lo);
    return inf;
}

Barrier Barrier::rescaled(double shift, double scale, double t_scale) const {
    if (!(scale > 0.0) || !(t_scale > 0.0)) throw InvalidArgument("barrier: rescale factors must be positive");
    std::vector<double> grid = grid_;
    for (double& x : grid) x = shift + scale * x;
    std::vector<double> cells = cells_;
    for (double& v : cells) v *= t_scale;
    std::vector<double> points = points_;
    for (double& v : points) v *= t_scale;
    return Barrier(std::move(grid), std::move(cells), std::move(points), t_cap_ * t_scale);
}

IntervalSet region_at_least(const Barrier& r, double t) {
    if (t < 0.0) throw InvalidArgument("region_at_least: t must be >= 0");
    const auto& grid = r.grid();
    const auto& cells = r.cells();
    IntervalSet out;
    std::optional<Interval> open;
    auto close_run = [&](double hi, bool hi_closed) {
        if (!open) return;
        open->hi = hi;
        open->hi_closed = hi_closed;
        if (!open->empty()) out.push_back(*open);
        open.reset();
    };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // point element {x_i}
        if (r.eval_point(i) >= t) {
            if (!open) open = Interval{grid[i], grid[i], true, true};
        } else {
            close_run(grid[i], false);
        }
        if (i + 1 == grid.size()) break;
        // cell element (x_i, x_{i+1})
        if (cells[i] >= t) {
            if (!open) open = Interval{grid[i], grid[i], false, false};
        } else {
            close_run(grid[i], r.eval_point(i) >= t);
        }
    }
    close_run(grid.back(), r.eval_point(grid.size() - 1) >= t);
    return out;
}

Barrier regularize(const Barrier& r, const IntervalSet& keep) {
    std::vector<double> grid = r.grid();
    for (const auto& i : keep) {
        for (double e : {i.lo, i.hi}) {
            if (e > r.lo() && e < r.hi()) grid.push_back(e);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const auto& old = r.grid();
    std::vector<double> cells(grid.size() - 1);
    std::vector<double> points(grid.size());
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double mid = 0.5 * (grid[i] + grid[i + 1]);
        bool inside = false;
        for (const auto& k : keep) inside = inside || (k.lo <= grid[i] && grid[i + 1] <= k.hi);
        cells[i] = inside ? r.eval(mid) : 0.0;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!contains(keep, grid[i])) {
            points[i] = 0.0;
            continue;
        }
        const auto it = std::lower_bound(old.begin(), old.end(), grid[i]);
        if (it != old.end() && *it == grid[i]) {
            points[i] = r.points()[static_cast<std::size_t>(it - old.begin())];
        } else {
            points[i] = r.eval(grid[i]);  // inserted inside an old cell
        }
    }
    return Barrier(std::move(grid), std::move(cells), std::move(points), r.t_cap());
}

Barrier paste_barriers(double base_level, std::span<const BarrierPiece> pieces,
                       std::optional<std::pair<double, double>> span) {
    if (!(base_level >= 0.0) || !std::isfinite(base_level))
        throw InvalidArgument("paste_barriers: base level must be finite and >= 0");
    std::vector<const BarrierPiece*> sorted;
    for (const auto& p : pieces) {
        if (!(p.where.hi > p.where.lo)) throw InvalidArgument("paste_barriers: empty piece interval");
        sorted.push_back(&p);
    }
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->where.lo < b->where.lo; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i]->where.lo < sorted[i - 1]->where.hi) {
            std::ostringstream msg;
            msg << "paste_barriers: pieces (" << sorted[i - 1]->where.lo << ", " << sorted[i - 1]->where.hi
                << ") and (" << sorted[i]->where.lo << ", " << sorted[i]->where.hi << ") overlap";
            throw InvalidArgument(msg.str());
        }
    }
    if (!span) {
        if (sorted.empty()) throw InvalidArgument("paste_barriers: need a span when there are no pieces");
        span = std::pair{sorted.front()->where.lo, sorted.back()->where.hi};
    }
    const auto [lo, hi] = *span;
    if (!(hi > lo)) throw InvalidArgument("paste_barriers: empty span");

    std::vector<double> grid{lo, hi};
    double t_cap = base_level;
    for (const auto* p : sorted) {
        if (p->where.lo < lo || p->where.hi > hi) throw InvalidArgument("paste_barriers: piece outside span");
        grid.push_back(p->where.lo);
        grid.push_back(p->where.hi);
        for (double x : p->barrier.grid()) {
            if (x > p->where.lo && x < p->where.hi) grid.push_back(x);
        }
        t_cap = std::max(t_cap, base_level + p->barrier.t_cap());
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto piece_at = [&](double x) -> const BarrierPiece* {
        for (const auto* p : sorted) {
            if (p->where.contains(x)) return p;
        }
        return nullptr;
    };
    std::vector<double> cells(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double mid = 0.5 * (grid[i] + grid[i + 1]);
        const auto* p = piece_at(mid);
        cells[i] = p ? base_level + p->barrier.eval(mid) : base_level;
    }
    std::vector<double> points(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto* p = piece_at(grid[i]);
        points[i] = p ? base_level + p->barrier.eval(grid[i]) : base_level;
    }
    return Barrier(std::move(grid), std::move(cells), std::move(points), t_cap);
}

ContinuityModulus continuity_modulus(const Barrier& r) {
    ContinuityModulus out{0.0, r.lo()};
    const auto& cells = r.cells();
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        const double a = cells[i];
        const double b = cells[i + 1];
        if (std::isinf(a) || std::isinf(b)) {
            if (std::isinf(a) && std::isinf(b)) continue;
            return {kInf, r.grid()[i + 1]};
        }
        if (std::abs(a - b) > out.max_jump) out = {std::abs(a - b), r.grid()[i + 1]};
    }
    return out;
}

}  // namespace skorokhod
