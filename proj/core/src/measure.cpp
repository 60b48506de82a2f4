// SPDX-License-Identifier: MIT
#include "skorokhod/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "poly.hpp"
#include "skorokhod/errors.hpp"

namespace skorokhod {

using detail::poly_eval;
using detail::poly_m0;
using detail::poly_m1;
using detail::poly_shift;

double DensityPiece::density(double x) const noexcept {
    if (x < lo || x >= hi) return 0.0;
    return poly_eval(coeffs, x - lo);
}

double DensityPiece::mass() const noexcept { return poly_m0(coeffs, width()); }

namespace {

bool same_location(const Atom& a, const Atom& b) { return a.location == b.location; }

/// Integral of the piece over [u, v] intersected with the piece, as (mass, first moment).
std::pair<double, double> piece_moments(const DensityPiece& p, double u, double v) {
    const double lo = std::max(u, p.lo);
    const double hi = std::min(v, p.hi);
    if (!(hi > lo)) return {0.0, 0.0};
    if (lo == p.lo && hi == p.hi) {
        const double m0 = poly_m0(p.coeffs, p.width());
        return {m0, p.lo * m0 + poly_m1(p.coeffs, p.width())};
    }
    const auto q = poly_shift(p.coeffs, lo - p.lo);
    const double m0 = poly_m0(q, hi - lo);
    return {m0, lo * m0 + poly_m1(q, hi - lo)};
}

/// Splits overlapping pieces into a disjoint partition, summing densities.
std::vector<DensityPiece> merge_pieces(std::vector<DensityPiece> pieces) {
    std::erase_if(pieces, [](const DensityPiece& p) { return !(p.hi > p.lo); });
    if (pieces.empty()) return pieces;

    std::vector<double> cuts;
    cuts.reserve(2 * pieces.size());
    for (const auto& p : pieces) {
        cuts.push_back(p.lo);
        cuts.push_back(p.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::sort(pieces.begin(), pieces.end(),
              [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });

    std::vector<DensityPiece> out;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k];
        const double hi = cuts[k + 1];
        std::vector<double> acc;
        bool covered = false;
        for (const auto& p : pieces) {
            if (p.lo > lo) break;
            if (p.hi < hi) continue;
            const auto q = poly_shift(p.coeffs, lo - p.lo);
            if (acc.size() < q.size()) acc.resize(q.size(), 0.0);
            for (std::size_t i = 0; i < q.size(); ++i) acc[i] += q[i];
            covered = true;
        }
        if (covered) out.push_back({lo, hi, std::move(acc)});
    }
    return out;
}

}  // namespace

Measure::Measure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces, double declared_total)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)), declared_total_(declared_total) {
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.location) || !std::isfinite(a.mass))
            throw InvalidArgument("measure: non-finite atom");
        if (a.mass < 0.0) throw InvalidArgument("measure: negative atom mass");
    }
    std::erase_if(atoms_, [](const Atom& a) { return a.mass == 0.0; });
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    // coalesce atoms that share a location
    std::vector<Atom> merged;
    for (const auto& a : atoms_) {
        if (!merged.empty() && same_location(merged.back(), a)) {
            merged.back().mass += a.mass;
        } else {
            merged.push_back(a);
        }
    }
    atoms_ = std::move(merged);

    for (const auto& p : pieces_) {
        if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !(p.hi > p.lo))
            throw InvalidArgument("measure: density piece must be a bounded interval [lo, hi)");
        if (p.coeffs.empty() || p.coeffs.size() > kMaxDegree + 1)
            throw InvalidArgument("measure: density piece degree must be in [0, 3]");
        double scale = 0.0;
        for (double c : p.coeffs) {
            if (!std::isfinite(c)) throw InvalidArgument("measure: non-finite density coefficient");
        }
        // endpoints plus Chebyshev points of the piece
        constexpr int kSamples = 8;
        std::vector<double> samples{0.0, p.width()};
        for (int i = 0; i < kSamples; ++i) {
            const double c = std::cos(std::numbers::pi * (2 * i + 1) / (2.0 * kSamples));
            samples.push_back(0.5 * p.width() * (1.0 + c));
        }
        double lowest = std::numeric_limits<double>::infinity();
        for (double s : samples) {
            const double v = poly_eval(p.coeffs, s);
            lowest = std::min(lowest, v);
            scale = std::max(scale, std::abs(v));
        }
        if (lowest < -1e-12 * (1.0 + scale)) {
            std::ostringstream msg;
            msg << "measure: density negative on [" << p.lo << ", " << p.hi << ")";
            throw InvalidArgument(msg.str());
        }
    }
    std::sort(pieces_.begin(), pieces_.end(),
              [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        if (pieces_[i].lo < pieces_[i - 1].hi)
            throw InvalidArgument("measure: density pieces overlap");
    }

    index();

    const double total = total_mass();
    if (!std::isfinite(declared_total) ||
        std::abs(total - declared_total) > kTotalTolerance * std::max(1.0, std::abs(declared_total))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "measure: parts sum to " << total << " but declared total is " << declared_total;
        throw InvalidArgument(msg.str());
    }
}

Measure Measure::from_parts(std::vector<Atom> atoms, std::vector<DensityPiece> pieces) {
    double total = 0.0;
    for (const auto& a : atoms) total += a.mass;
    for (const auto& p : pieces) {
        if (p.hi > p.lo && !p.coeffs.empty()) total += p.mass();
    }
    return Measure(std::move(atoms), std::move(pieces), total);
}

void Measure::index() {
    atom_cum_.assign(atoms_.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms_.size(); ++i) atom_cum_[i + 1] = atom_cum_[i] + atoms_[i].mass;
    piece_cum_.assign(pieces_.size() + 1, 0.0);
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        piece_cum_[i + 1] = piece_cum_[i] + pieces_[i].mass();

    knots_.clear();
    for (const auto& a : atoms_) knots_.push_back(a.location);
    for (const auto& p : pieces_) {
        knots_.push_back(p.lo);
        knots_.push_back(p.hi);
    }
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
}

Measure Measure::dirac(double location, double mass) {
    return Measure({{location, mass}}, {}, mass);
}

Measure Measure::uniform(double a, double b) {
    if (!(b > a)) throw InvalidArgument("uniform: need a < b");
    return Measure({}, {{a, b, {1.0 / (b - a)}}}, 1.0);
}

Measure Measure::gaussian(double mean, double variance) {
    if (!(variance > 0.0) || !std::isfinite(mean))
        throw InvalidArgument("gaussian: need finite mean and variance > 0");
    constexpr int kPerSd = 16;
    constexpr int kSd = 8;
    const double sd = std::sqrt(variance);
    const double h = sd / kPerSd;
    const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
    auto f = [&](double z) { return norm * std::exp(-0.5 * z * z); };

    const int n = 2 * kSd * kPerSd;
    std::vector<DensityPiece> pieces;
    pieces.reserve(n);
    for (int k = 0; k < n; ++k) {
        // nodes in standardised units are exact binary fractions
        const double z0 = -kSd + static_cast<double>(k) / kPerSd;
        const double z1 = -kSd + static_cast<double>(k + 1) / kPerSd;
        const double f0 = f(z0);
        const double f1 = f(z1);
        const double d0 = -z0 / sd * f0;
        const double d1 = -z1 / sd * f1;
        const double slope = (f1 - f0) / h;
        const double c2 = (3.0 * slope - 2.0 * d0 - d1) / h;
        const double c3 = (d0 + d1 - 2.0 * slope) / (h * h);
        pieces.push_back({mean + z0 * sd, mean + z1 * sd, {f0, d0, c2, c3}});
    }
    double total = 0.0;
    for (const auto& p : pieces) total += p.mass();
    for (auto& p : pieces) {
        for (double& c : p.coeffs) c /= total;
    }
    return from_parts({}, std::move(pieces));
}

Measure Measure::tent(double a, double b, double lambda, double p) {
    // validates parameters
    (void)tent_density(lambda, p, a, b, 0.5 * (a + b));
    std::vector<DensityPiece> pieces;
    if (lambda < 1.0) pieces.push_back({a, a + p, {(1.0 - lambda) * 2.0 / p, -(1.0 - lambda) * 2.0 / (p * p)}});
    if (lambda > 0.0) pieces.push_back({b - p, b, {0.0, lambda * 2.0 / (p * p)}});
    return Measure({}, std::move(pieces), 1.0);
}

Measure Measure::sum(std::span<const Measure> parts) {
    std::vector<Atom> atoms;
    std::vector<DensityPiece> pieces;
    double declared = 0.0;
    for (const auto& m : parts) {
        atoms.insert(atoms.end(), m.atoms_.begin(), m.atoms_.end());
        pieces.insert(pieces.end(), m.pieces_.begin(), m.pieces_.end());
        declared += m.total_mass();
    }
    return Measure(std::move(atoms), merge_pieces(std::move(pieces)), declared);
}

double Measure::total_mass() const noexcept { return atom_cum_.back() + piece_cum_.back(); }

double Measure::first_moment() const noexcept {
    double acc = 0.0;
    for (const auto& a : atoms_) acc += a.location * a.mass;
    for (const auto& p : pieces_) acc += piece_moments(p, p.lo, p.hi).second;
    return acc;
}

double Measure::mean() const {
    const double total = total_mass();
    if (!(total > 0.0)) throw InvalidArgument("measure: mean of a zero measure");
    return first_moment() / total;
}

std::pair<double, double> Measure::mass_and_moment(const Interval& set) const noexcept {
    if (set.empty()) return {0.0, 0.0};
    double mass = 0.0;
    double moment = 0.0;
    for (const auto& a : atoms_) {
        if (set.contains(a.location)) {
            mass += a.mass;
            moment += a.mass * a.location;
        }
    }
    // pieces are disjoint and sorted; skip to the first one that can overlap
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), set.lo,
                               [](double x, const DensityPiece& p) { return x < p.hi; });
    for (; it != pieces_.end() && it->lo < set.hi; ++it) {
        const auto [m0, m1] = piece_moments(*it, set.lo, set.hi);
        mass += m0;
        moment += m1;
    }
    return {mass, moment};
}

double Measure::mass(const Interval& set) const noexcept { return mass_and_moment(set).first; }

double Measure::mass_open(double a, double b) const noexcept { return mass(Interval{a, b}); }

double Measure::cdf(double x) const noexcept {
    const auto na = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                                     [](double v, const Atom& a) { return v < a.location; }) -
                    atoms_.begin();
    double acc = atom_cum_[static_cast<std::size_t>(na)];
    const auto np = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                                     [](double v, const DensityPiece& p) { return v < p.lo; }) -
                    pieces_.begin();
    if (np > 0) {
        const auto& p = pieces_[static_cast<std::size_t>(np - 1)];
        acc += piece_cum_[static_cast<std::size_t>(np - 1)];
        acc += x >= p.hi ? piece_cum_[static_cast<std::size_t>(np)] - piece_cum_[static_cast<std::size_t>(np - 1)]
                         : poly_m0(p.coeffs, x - p.lo);
    }
    return acc;
}

double Measure::cdf_before(double x) const noexcept {
    const auto na = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                     [](const Atom& a, double v) { return a.location < v; }) -
                    atoms_.begin();
    const double atoms_below = atom_cum_[static_cast<std::size_t>(na)];
    const auto na_le = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                                        [](double v, const Atom& a) { return v < a.location; }) -
                       atoms_.begin();
    return cdf(x) - (atom_cum_[static_cast<std::size_t>(na_le)] - atoms_below);
}

double Measure::density(double x) const noexcept {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const DensityPiece& p) { return v < p.lo; });
    if (it == pieces_.begin()) return 0.0;
    return std::prev(it)->density(x);
}

double Measure::potential(double x) const noexcept {
    double integral = 0.0;
    for (const auto& a : atoms_) integral += a.mass * std::abs(x - a.location);
    for (const auto& p : pieces_) {
        const double L = p.width();
        const double xs = x - p.lo;
        const double m0L = poly_m0(p.coeffs, L);
        const double m1L = poly_m1(p.coeffs, L);
        if (xs <= 0.0) {
            integral += m1L - xs * m0L;
        } else if (xs >= L) {
            integral += xs * m0L - m1L;
        } else {
            const double m0x = poly_m0(p.coeffs, xs);
            const double m1x = poly_m1(p.coeffs, xs);
            integral += (xs * m0x - m1x) + (m1L - m1x) - xs * (m0L - m0x);
        }
    }
    return -integral;
}

std::vector<double> Measure::potential(std::span<const double> xs) const {
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(), [this](double x) { return potential(x); });
    return out;
}

double Measure::hat_integral(double c, double h) const noexcept {
    double acc = 0.0;
    for (const auto& a : atoms_) {
        const double w = h - std::abs(a.location - c);
        if (w > 0.0) acc += a.mass * w;
    }
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), c - h,
                               [](double x, const DensityPiece& p) { return x < p.hi; });
    for (; it != pieces_.end() && it->lo < c + h; ++it) {
        const auto& p = *it;
        // left flank [u, v] inside [c - h, c]: weight (h - (c - u)) + s
        if (double u = std::max(p.lo, c - h), v = std::min(p.hi, c); v > u) {
            const auto q = poly_shift(p.coeffs, u - p.lo);
            acc += (h - (c - u)) * poly_m0(q, v - u) + poly_m1(q, v - u);
        }
        // right flank [u, v] inside [c, c + h]: weight (h - (u - c)) - s
        if (double u = std::max(p.lo, c), v = std::min(p.hi, c + h); v > u) {
            const auto q = poly_shift(p.coeffs, u - p.lo);
            acc += (h - (u - c)) * poly_m0(q, v - u) - poly_m1(q, v - u);
        }
    }
    return acc;
}

std::optional<std::pair<double, double>> Measure::support_hull() const noexcept {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& a : atoms_) {
        lo = std::min(lo, a.location);
        hi = std::max(hi, a.location);
    }
    if (!pieces_.empty()) {
        lo = std::min(lo, pieces_.front().lo);
        hi = std::max(hi, pieces_.back().hi);
    }
    if (lo > hi) return std::nullopt;
    return std::pair{lo, hi};
}

double Measure::quantile(double u) const {
    const double total = total_mass();
    if (!(total > 0.0)) throw InvalidArgument("quantile: zero measure");
    const double target = std::clamp(u, 0.0, 1.0) * total;
    const auto hull = *support_hull();

    // between consecutive knots the cdf is continuous
    const auto& knots = knots_;
    const auto it = std::partition_point(knots.begin(), knots.end(),
                                         [&](double k) { return cdf(k) < target; });
    if (it == knots.end()) return hull.second;
    if (it == knots.begin()) return *it;
    const double right = *it;
    if (cdf_before(right) < target) return right;  // atom at right

    double lo = *std::prev(it);
    double hi = right;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

Measure Measure::restricted(double a, double b) const {
    std::vector<Atom> atoms;
    for (const auto& at : atoms_) {
        if (at.location > a && at.location < b) atoms.push_back(at);
    }
    std::vector<DensityPiece> pieces;
    for (const auto& p : pieces_) {
        const double lo = std::max(p.lo, a);
        const double hi = std::min(p.hi, b);
        if (!(hi > lo)) continue;
        pieces.push_back({lo, hi, poly_shift(p.coeffs, lo - p.lo)});
    }
    return from_parts(std::move(atoms), std::move(pieces));
}

Measure Measure::scaled(double w) const {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("scale: weight must be finite and >= 0");
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms) a.mass *= w;
    std::vector<DensityPiece> pieces = pieces_;
    for (auto& p : pieces) {
        for (double& c : p.coeffs) c *= w;
    }
    return Measure(std::move(atoms), std::move(pieces), declared_total_ * w);
}

Measure Measure::normalized() const {
    const double total = total_mass();
    if (!(total > 0.0)) throw InvalidArgument("normalize: zero measure");
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms) a.mass /= total;
    std::vector<DensityPiece> pieces = pieces_;
    for (auto& p : pieces) {
        for (double& c : p.coeffs) c /= total;
    }
    return from_parts(std::move(atoms), std::move(pieces));
}

Measure Measure::affine_image(double shift, double scale) const {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift))
        throw InvalidArgument("affine_image: need finite shift and scale > 0");
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms) a.location = shift + scale * a.location;
    std::vector<DensityPiece> pieces = pieces_;
    for (auto& p : pieces) {
        p.lo = shift + scale * p.lo;
        p.hi = shift + scale * p.hi;
        double f = 1.0 / scale;
        for (double& c : p.coeffs) {
            c *= f;
            f /= scale;
        }
    }
    return from_parts(std::move(atoms), std::move(pieces));
}

ConvexOrderResult convex_order(const Measure& m0, const Measure& m1, std::span<const double> grid) {
    constexpr double kMeanTol = 1e-9;
    constexpr double kOrderTol = 1e-10;
    const double mean0 = m0.mean();
    const double mean1 = m1.mean();
    if (std::abs(mean0 - mean1) > kMeanTol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "convex order: means differ (" << mean0 << " vs " << mean1 << ")";
        throw MeanMismatch(msg.str());
    }
    ConvexOrderResult result{true, std::nullopt};
    double worst = 0.0;
    for (double x : grid) {
        const double violation = m1.potential(x) - m0.potential(x);
        if (violation > kOrderTol && violation > worst) {
            worst = violation;
            result.holds = false;
            result.witness = x;
        }
    }
    return result;
}

IntervalSet gap_intervals(std::span<const double> grid, std::span<const double> gap, double tol) {
    if (grid.size() != gap.size()) throw InvalidArgument("gap_intervals: size mismatch");
    IntervalSet out;
    const std::size_t n = grid.size();
    std::size_t i = 0;
    while (i < n) {
        if (!(gap[i] > tol)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && gap[j + 1] > tol) ++j;
        const double lo = i > 0 ? grid[i - 1] : grid[0];
        const double hi = j + 1 < n ? grid[j + 1] : grid[n - 1];
        out.push_back(Interval{lo, hi});
        i = j + 1;
    }
    return out;
}

IntervalSet embedding_interval(const Measure& m0, const Measure& m1, std::span<const double> grid,
                               double tol) {
    std::vector<double> gap(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) gap[i] = m0.potential(grid[i]) - m1.potential(grid[i]);
    return gap_intervals(grid, gap, tol);
}

}  // namespace skorokhod
