// SPDX-License-Identifier: MIT
#include "skorokhod/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skorokhod/errors.hpp"
#include "skorokhod/rng.hpp"

namespace skorokhod {

std::string to_string(DiffusionKind kind) {
    switch (kind) {
        case DiffusionKind::brownian: return "brownian";
        case DiffusionKind::geometric: return "geometric";
        case DiffusionKind::affine: return "affine";
        case DiffusionKind::table: return "table";
    }
    return "unknown";
}

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::unverified: return "unverified";
    }
    return "unknown";
}

bool Domain::bounded() const noexcept { return std::isfinite(lo) || std::isfinite(hi); }

DiffusionSpec DiffusionSpec::brownian() { return {}; }

DiffusionSpec DiffusionSpec::geometric() {
    DiffusionSpec s;
    s.kind_ = DiffusionKind::geometric;
    s.domain_ = {0.0, std::numeric_limits<double>::infinity()};
    s.k_ = 1.0;
    s.alpha_ = 0.0;
    s.beta_ = 1.0;
    return s;
}

DiffusionSpec DiffusionSpec::affine(double alpha, double beta, Domain domain, double k) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InvalidArgument("affine: non-finite coefficient");
    if (!(domain.hi > domain.lo)) throw InvalidArgument("affine: empty domain");
    DiffusionSpec s;
    s.kind_ = DiffusionKind::affine;
    s.domain_ = domain;
    s.alpha_ = alpha;
    s.beta_ = beta;
    s.k_ = k >= 0.0 ? k : std::max(std::abs(alpha), std::abs(beta));
    return s;
}

DiffusionSpec DiffusionSpec::table(SigmaTable table, Domain domain, double k) {
    const auto& tg = table.t_grid;
    const auto& xg = table.x_grid;
    if (tg.empty() || xg.size() < 2) throw InvalidArgument("sigma table: need >= 1 time and >= 2 space nodes");
    if (table.values.size() != tg.size() * xg.size())
        throw InvalidArgument("sigma table: values must have t_grid.size() * x_grid.size() entries");
    auto increasing = [](const std::vector<double>& g) {
        for (std::size_t i = 1; i < g.size(); ++i) {
            if (!(g[i] > g[i - 1])) return false;
        }
        return std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); });
    };
    if (!increasing(tg) || !increasing(xg)) throw InvalidArgument("sigma table: grids must increase strictly");
    if (!std::all_of(table.values.begin(), table.values.end(), [](double v) { return std::isfinite(v); }))
        throw InvalidArgument("sigma table: non-finite value");
    if (!(domain.hi > domain.lo)) throw InvalidArgument("sigma table: empty domain");
    if (!(k >= 0.0)) throw InvalidArgument("sigma table: k must be >= 0");
    DiffusionSpec s;
    s.kind_ = DiffusionKind::table;
    s.domain_ = domain;
    s.k_ = k;
    s.table_ = std::move(table);
    return s;
}

namespace {

/// index i and weight w with g[i] + w (g[i+1] - g[i]) = clamp(v)
std::pair<std::size_t, double> bracket(const std::vector<double>& g, double v) noexcept {
    if (g.size() == 1 || v <= g.front()) return {0, 0.0};
    if (v >= g.back()) return {g.size() - 2, 1.0};
    const auto it = std::upper_bound(g.begin(), g.end(), v);
    const auto i = static_cast<std::size_t>(it - g.begin()) - 1;
    return {i, (v - g[i]) / (g[i + 1] - g[i])};
}

}  // namespace

double DiffusionSpec::table_sigma(double t, double x) const noexcept {
    const auto& tb = table_;
    const std::size_t nx = tb.x_grid.size();
    const auto [j, wx] = bracket(tb.x_grid, x);
    auto row = [&](std::size_t i) {
        return (1.0 - wx) * tb.values[i * nx + j] + wx * tb.values[i * nx + j + 1];
    };
    if (tb.t_grid.size() == 1) return row(0);
    const auto [i, wt] = bracket(tb.t_grid, t);
    return (1.0 - wt) * row(i) + wt * row(i + 1);
}

bool AssumptionReport::all_pass() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::pass; });
}

const AssumptionCheck& AssumptionReport::at(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw InvalidArgument("assumption report: no check named '" + name + "'");
}

AssumptionReport validate_assumptions(const DiffusionSpec& sde, const Box& box) {
    for (double v : {box.t_lo, box.t_hi, box.x_lo, box.x_hi}) {
        if (!std::isfinite(v)) throw InvalidArgument("validate_assumptions: box must be finite");
    }
    if (box.t_lo > box.t_hi || box.x_lo > box.x_hi) throw InvalidArgument("validate_assumptions: empty box");

    constexpr int kTriples = 10000;
    constexpr std::uint64_t kSeed = 0x5eed5eedULL;
    const double k = sde.k();
    StreamRng rng(kSeed, 0);
    auto lerp = [](double a, double b, double u) { return a + (b - a) * u; };

    double lip = 0.0;
    double growth = 0.0;
    for (int n = 0; n < kTriples; ++n) {
        const double t = lerp(box.t_lo, box.t_hi, rng.uniform());
        const double x = lerp(box.x_lo, box.x_hi, rng.uniform());
        const double y = lerp(box.x_lo, box.x_hi, rng.uniform());
        const double sx = sde.sigma(t, x);
        if (x != y) lip = std::max(lip, std::abs(sx - sde.sigma(t, y)) / std::abs(x - y));
        growth = std::max(growth, std::abs(sx) / (1.0 + std::abs(x)));
    }

    // deterministic lattice for the lower bound, including the box corners
    constexpr int kNx = 1025;
    constexpr int kNt = 33;
    double lowest = std::numeric_limits<double>::infinity();
    bool has_pos = false;
    bool has_neg = false;
    auto visit = [&](double t, double x) {
        const double s = sde.sigma(t, x);
        lowest = std::min(lowest, std::abs(s));
        growth = std::max(growth, std::abs(s) / (1.0 + std::abs(x)));
        has_pos = has_pos || s > 0.0;
        has_neg = has_neg || s < 0.0;
    };
    for (int i = 0; i < kNt; ++i) {
        const double t = lerp(box.t_lo, box.t_hi, static_cast<double>(i) / (kNt - 1));
        for (int j = 0; j < kNx; ++j) visit(t, lerp(box.x_lo, box.x_hi, static_cast<double>(j) / (kNx - 1)));
        if (sde.kind() == DiffusionKind::affine && sde.beta() != 0.0) {
            const double root = -sde.alpha() / sde.beta();
            if (root >= box.x_lo && root <= box.x_hi) visit(t, root);
        }
        if (sde.kind() == DiffusionKind::geometric && box.x_lo <= 0.0 && box.x_hi >= 0.0) visit(t, 0.0);
    }
    // sigma is continuous in x, so a sign change forces a zero in the box
    if (has_pos && has_neg) lowest = 0.0;

    const double slack = 1.0 + 1e-12;
    AssumptionReport report;
    report.checks.push_back({"lipschitz", lip <= k * slack ? CheckStatus::pass : CheckStatus::fail, lip, k,
                             "worst sampled |sigma(t,x)-sigma(t,y)|/|x-y| over 10^4 triples"});
    report.checks.push_back({"growth", growth <= k * slack ? CheckStatus::pass : CheckStatus::fail, growth, k,
                             "worst sampled |sigma(t,x)|/(1+|x|)"});
    report.checks.push_back({"lower_bound", lowest > 0.0 ? CheckStatus::pass : CheckStatus::fail, lowest, 0.0,
                             "min |sigma| over the box"});
    const bool table = sde.kind() == DiffusionKind::table;
    report.checks.push_back({"smoothness", table ? CheckStatus::unverified : CheckStatus::pass, 0.0, 0.0,
                             table ? "user table: bilinear, not verified" : "closed-form catalogue member"});
    const bool inside = box.x_lo > sde.domain().lo && box.x_hi < sde.domain().hi;
    report.checks.push_back({"domain", inside ? CheckStatus::pass : CheckStatus::fail, 0.0, 0.0,
                             inside ? "box inside the domain" : "box reaches outside the open domain"});
    return report;
}

namespace {

void require_closed_form(const DiffusionSpec& sde) {
    if (!sde.has_closed_form())
        throw InvalidArgument("transition density: no closed form for diffusion kind '" + to_string(sde.kind()) +
                              "'");
}

}  // namespace

double transition_density(const DiffusionSpec& sde, double s, double x, double t, double y) {
    require_closed_form(sde);
    if (!(t > s)) throw InvalidArgument("transition density: need t > s");
    const double v = t - s;
    if (sde.kind() == DiffusionKind::brownian) {
        const double d = y - x;
        return std::exp(-d * d / (2.0 * v)) / std::sqrt(2.0 * std::numbers::pi * v);
    }
    if (!(x > 0.0)) throw InvalidArgument("geometric transition density: need x > 0");
    if (!(y > 0.0)) return 0.0;
    const double z = std::log(y / x) + 0.5 * v;
    return std::exp(-z * z / (2.0 * v)) / (y * std::sqrt(2.0 * std::numbers::pi * v));
}

double density_sup_bound(const DiffusionSpec& sde, double s, double t, double x, double y) {
    require_closed_form(sde);
    if (!(t > s)) throw InvalidArgument("density_sup_bound: need t > s");
    if (!std::isfinite(x) || !std::isfinite(y) || x > y) throw InvalidArgument("density_sup_bound: need x <= y finite");
    const double v = t - s;
    const double peak = 1.0 / std::sqrt(2.0 * std::numbers::pi * v);
    if (sde.kind() == DiffusionKind::brownian) return peak;

    if (!(x > 0.0)) throw InvalidArgument("geometric density_sup_bound: need x > 0");
    // log density in w = log x', z = log y': g = -z - (z - w + v/2)^2 / (2v)
    const double lo = std::log(x);
    const double hi = std::log(y);
    auto g = [&](double w, double z) {
        const double d = z - w + 0.5 * v;
        return -z - d * d / (2.0 * v);
    };
    double best = -std::numeric_limits<double>::infinity();
    for (double w : {lo, hi}) {
        for (double z : {lo, hi}) best = std::max(best, g(w, z));
    }
    for (double z : {lo, hi}) best = std::max(best, g(std::clamp(z + 0.5 * v, lo, hi), z));
    for (double w : {lo, hi}) best = std::max(best, g(w, std::clamp(w - 1.5 * v, lo, hi)));
    return peak * std::exp(best);
}

}  // namespace skorokhod
