// SPDX-License-Identifier: MIT
#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <vector>

#include "skorokhod/errors.hpp"
#include "skorokhod/report.hpp"

namespace skorokhod::cli {

namespace {

namespace fs = std::filesystem;

fs::path output_dir(const ScenarioConfig& cfg, const RunOptions& opt) {
    fs::path dir = opt.output_dir.empty() ? cfg.output_dir : opt.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("output_dir: cannot create '" + dir.string() + "': " + ec.message());
    return dir;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    return out;
}

std::vector<std::string> provenance(const ScenarioConfig& cfg) {
    return {"scenario=" + cfg.name, "config_hash=" + cfg.hash, "tool_version=" + tool_version()};
}

ReportMeta base_meta(const ScenarioConfig& cfg, std::uint64_t seed) {
    ReportMeta m;
    m.config_hash = cfg.hash;
    m.seed = seed;
    m.strings.emplace_back("scenario", cfg.name);
    return m;
}

void add_grid_meta(ReportMeta& m, const SolveGrid& g) {
    m.numbers.emplace_back("grid.x_min", g.x_min);
    m.numbers.emplace_back("grid.x_max", g.x_max);
    m.numbers.emplace_back("grid.n_x", g.n_x);
    m.numbers.emplace_back("grid.t_cap", g.t_cap);
    m.numbers.emplace_back("grid.n_t", g.n_t);
}

void print_checks(const VerificationReport& rep, std::ostream& log) {
    for (const auto& c : rep.checks()) {
        const char* tag = c.outcome == Outcome::pass ? "PASS" : c.outcome == Outcome::fail ? "FAIL" : "SKIP";
        log << tag << "  " << c.name << "  statistic=" << format_number(c.statistic)
            << " threshold=" << format_number(c.threshold);
        if (!c.note.empty()) log << "  " << c.note;
        log << '\n';
    }
    log << rep.checks().size() - rep.n_failed() << '/' << rep.checks().size() << " checks passed\n";
}

void write_report(const fs::path& p, const VerificationReport& rep, const ReportMeta& meta) {
    auto out = open_out(p);
    write_report_json(out, rep, meta);
}

SolveResult run_solve(const ScenarioConfig& cfg) { return solve(cfg.problem(), cfg.grid); }

void add_scan(VerificationReport& rep, const ScenarioConfig& cfg, const EmbeddingProblem& problem,
              const SolveResult& res, const CheckDecl& c) {
    const Measure& m = c.measure == "target" ? problem.mu : cfg.measures.at(c.measure);
    std::optional<IntervalSet> within;
    if (c.within_embedding) {
        std::vector<double> nodes = res.barrier.grid();
        within = embedding_interval(problem.mu0, problem.mu, nodes, res.grid.embed_tol);
    }
    const auto ratios = c.side == ScanSide::right ? density_ratio_scan_right(m, c.x, c.eps, c.ys, within)
                                                  : density_ratio_scan_sym(m, c.x, c.eps, c.ys, within);
    double worst = 0.0;
    std::size_t defined = 0;
    for (double v : ratios) {
        if (std::isnan(v)) continue;
        ++defined;
        worst = std::max(worst, v);
    }
    std::string note = std::string(c.side == ScanSide::right ? "right" : "symmetric") + " scan at x = " +
                       format_number(c.x) + " of " + c.measure + ", ratios:";
    for (double v : ratios) note += " " + format_number(v);
    Outcome o = Outcome::pass;
    if (c.expect_zero) o = worst == 0.0 ? Outcome::pass : Outcome::fail;
    if (defined == 0) o = Outcome::skipped;
    rep.add({"density_scan", o, worst, 0.0, static_cast<std::int64_t>(ratios.size()), 0, note});
}

VerificationReport run_lemmas(const ScenarioConfig& cfg, const SolveResult& res, std::uint64_t& seed) {
    const EmbeddingProblem problem = cfg.problem();
    VerificationReport rep("lemmas:" + cfg.name);
    std::vector<CorridorSpec> mono;
    std::vector<CorridorSpec> bound;
    for (const auto& c : cfg.checks) {
        try {
            if (c.kind == CheckKind::corridor_monotonicity) mono.push_back(c.corridor);
            if (c.kind == CheckKind::corridor_bound) bound.push_back(c.corridor);
            if (c.kind == CheckKind::corridor_monotonicity || c.kind == CheckKind::corridor_bound)
                validate_corridor(c.corridor, res.barrier, c.kind == CheckKind::corridor_bound);
        } catch (const HypothesisViolation& e) {
            throw ConfigError(c.path + ": " + e.what());
        }
    }
    if (!mono.empty() || !bound.empty()) {
        SimParams sim = cfg.sim_params();
        seed = sim.seed;
        for (const auto& chk : check_corridor_monotonicity(problem, res.barrier, mono, sim)) rep.add(chk);
        for (const auto& chk : check_corridor_bound(problem, res.barrier, bound, sim)) rep.add(chk);
    }
    for (const auto& c : cfg.checks) {
        switch (c.kind) {
            case CheckKind::density_scan: add_scan(rep, cfg, problem, res, c); break;
            case CheckKind::atom_consistency:
                for (auto& chk : atom_consistency(problem.mu, res.barrier, res.grid.dt())) rep.add(chk);
                break;
            case CheckKind::tail_zero:
                rep.add(tail_zero_check(problem.mu, res.barrier, c.x, res.grid.dt(), c.tail_side));
                break;
            default: break;
        }
    }
    return rep;
}

std::vector<SolveGrid> theorem_grids(const ScenarioConfig& cfg) {
    if (!cfg.theorem_grids.empty()) return cfg.theorem_grids;
    SolveGrid coarse = cfg.grid;
    coarse.n_x = std::max(16, (cfg.grid.n_x + 1) / 2);
    coarse.n_t = std::max(16, cfg.grid.n_t / 2);
    return {coarse, cfg.grid};
}

void write_counterexample_files(const fs::path& dir, const ScenarioConfig& cfg, const CounterexampleResult& cx) {
    const auto prov = provenance(cfg);
    {
        auto out = open_out(dir / "counterexample_barrier.csv");
        write_barrier_csv(out, cx.barrier, prov);
    }
    auto out = open_out(dir / "counterexample_density.csv");
    for (const auto& c : prov) out << "# " << c << '\n';
    out << "x,density,cdf\n";
    const double lo = cx.points.back() - 0.25;
    const double hi = cx.points.front() + 0.25;
    constexpr int kRows = 2001;
    for (int i = 0; i < kRows; ++i) {
        const double x = lo + (hi - lo) * i / (kRows - 1);
        out << format_number(x) << ',' << format_number(cx.mu.density(x)) << ',' << format_number(cx.mu.cdf(x))
            << '\n';
    }
}

}  // namespace

int cmd_solve(const ScenarioConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const auto dir = output_dir(cfg, opt);
    const auto res = run_solve(cfg);
    const auto prov = provenance(cfg);
    {
        auto out = open_out(dir / "barrier.csv");
        write_barrier_csv(out, res.barrier, prov);
    }
    if (cfg.write_surface) {
        auto out = open_out(dir / "surface.csv");
        write_surface_csv(out, res.surface, prov, cfg.surface_stride);
    }
    const auto resid = residual_report(res.surface);
    const auto mod = continuity_modulus(res.barrier);

    VerificationReport rep("solve:" + cfg.name);
    const double tol = 10.0 * res.grid.psor_tol;
    rep.add({"discrete_residual", resid.max_residual <= tol ? Outcome::pass : Outcome::fail, resid.max_residual, tol,
             static_cast<std::int64_t>(resid.n_steps), 0,
             "at x = " + format_number(resid.at_x) + ", t = " + format_number(resid.at_t) +
                 "; kink nodes excluded, their max = " + format_number(resid.max_kink_residual)});
    rep.add({"continuity_modulus", Outcome::pass, mod.max_jump, kInf, static_cast<std::int64_t>(res.barrier.n_cells()),
             0, "at x = " + format_number(mod.location)});
    ReportMeta meta = base_meta(cfg, 0);
    add_grid_meta(meta, res.grid);
    for (std::size_t i = 0; i < res.notes.size(); ++i) meta.strings.emplace_back("note_" + std::to_string(i + 1), res.notes[i]);
    write_report(dir / "solve_report.json", rep, meta);

    for (const auto& n : res.notes) log << "note: " << n << '\n';
    log << "grid: [" << format_number(res.grid.x_min) << ", " << format_number(res.grid.x_max) << "] x [0, "
        << format_number(res.grid.t_cap) << "], " << res.grid.n_x << " x " << res.grid.n_t << '\n';
    log << "continuity modulus: " << format_number(mod.max_jump) << " at x = " << format_number(mod.location) << '\n';
    log << "max residual: " << format_number(resid.max_residual) << '\n';
    log << "barrier written to " << (dir / "barrier.csv").string() << '\n';
    return rep.passed() ? kPass : kCheckFailure;
}

int cmd_embed(const ScenarioConfig& cfg, const fs::path& barrier_path, const RunOptions& opt, std::ostream& log) {
    std::ifstream in(barrier_path, std::ios::binary);
    if (!in) throw ConfigError(barrier_path.string() + ": cannot open barrier file");
    const Barrier r = read_barrier_csv(in);
    const auto dir = output_dir(cfg, opt);
    SimParams sim = cfg.sim_params();
    if (opt.t_eval) sim.t_eval = *opt.t_eval;
    const EmbeddingProblem problem = cfg.problem();
    const auto law = simulate_stopped(problem.diffusion, problem.mu0, r, sim);
    {
        auto out = open_out(dir / "empirical.csv");
        auto comments = provenance(cfg);
        comments.push_back("seed=" + std::to_string(sim.seed));
        comments.push_back("dt=" + format_number(sim.dt));
        write_empirical_csv(out, law, comments);
    }
    const double ks = ks_distance(law, problem.mu);
    const double rate = law.unstopped_rate();

    VerificationReport rep("embed:" + cfg.name);
    if (cfg.embed.ks_threshold) {
        rep.add({"ks_distance", ks < *cfg.embed.ks_threshold ? Outcome::pass : Outcome::fail, ks,
                 *cfg.embed.ks_threshold, law.n_paths, sim.seed, "against the configured target"});
    } else {
        rep.add({"ks_distance", Outcome::skipped, ks, kInf, law.n_paths, sim.seed, "no threshold configured"});
    }
    const bool deliberate_inf = r.has_inf_cells() || std::isfinite(sim.t_eval);
    const bool rate_ok = deliberate_inf || rate < cfg.embed.max_unstopped_rate;
    rep.add({"unstopped_rate", rate_ok ? (deliberate_inf ? Outcome::skipped : Outcome::pass) : Outcome::fail, rate,
             cfg.embed.max_unstopped_rate, law.n_paths, sim.seed,
             deliberate_inf ? "barrier has infinite cells or t_eval is set" : "paths reaching t_cap unstopped"});
    ReportMeta meta = base_meta(cfg, sim.seed);
    meta.numbers.emplace_back("sim.dt", sim.dt);
    meta.numbers.emplace_back("sim.n_paths", static_cast<double>(sim.n_paths));
    meta.numbers.emplace_back("sim.t_cap", sim.t_cap);
    meta.numbers.emplace_back("sim.t_eval", sim.t_eval);
    for (std::size_t i = 0; i < law.warnings.size(); ++i)
        meta.strings.emplace_back("warning_" + std::to_string(i + 1), law.warnings[i]);
    write_report(dir / "embed_report.json", rep, meta);

    for (const auto& w : law.warnings) log << "warning: " << w << '\n';
    log << "KS distance: " << format_number(ks) << '\n';
    log << "unstopped: " << law.unstopped << " of " << law.n_paths << " (rate " << format_number(rate) << ")\n";
    if (!rate_ok) return kNumericalFailure;
    return rep.passed() ? kPass : kCheckFailure;
}

int cmd_verify(const ScenarioConfig& cfg, const std::string& suite, const RunOptions& opt, std::ostream& log) {
    const auto dir = output_dir(cfg, opt);
    VerificationReport rep;
    ReportMeta meta;
    if (suite == "lemmas") {
        if (cfg.checks.empty()) throw ConfigError("checks: the lemmas suite needs at least one declared check");
        const auto res = run_solve(cfg);
        std::uint64_t seed = 0;
        rep = run_lemmas(cfg, res, seed);
        meta = base_meta(cfg, seed);
        add_grid_meta(meta, res.grid);
    } else if (suite == "theorem") {
        const auto grids = theorem_grids(cfg);
        rep = theorem_suite(cfg.problem(), grids);
        meta = base_meta(cfg, 0);
        for (const auto& g : grids) add_grid_meta(meta, g);
    } else if (suite == "counterexample") {
        const auto& cx = cfg.counterexample;
        const auto res = build_counterexample(cx.x, cx.n_intervals, cx.grid, cx.mixture_cells);
        rep = res.report;
        meta = base_meta(cfg, 0);
        meta.numbers.emplace_back("counterexample.x", cx.x);
        meta.numbers.emplace_back("counterexample.n_intervals", cx.n_intervals);
        add_grid_meta(meta, cx.grid);
    } else {
        throw ConfigError("--suite: expected lemmas, theorem or counterexample, got '" + suite + "'");
    }
    write_report(dir / (suite + "_report.json"), rep, meta);
    print_checks(rep, log);
    return rep.passed() ? kPass : kCheckFailure;
}

int cmd_example(const ScenarioConfig& cfg, const RunOptions& opt, std::ostream& log) {
    const auto dir = output_dir(cfg, opt);
    const auto& cx = cfg.counterexample;
    const auto res = build_counterexample(cx.x, cx.n_intervals, cx.grid, cx.mixture_cells);
    write_counterexample_files(dir, cfg, res);
    ReportMeta meta = base_meta(cfg, 0);
    meta.numbers.emplace_back("counterexample.x", cx.x);
    meta.numbers.emplace_back("counterexample.n_intervals", cx.n_intervals);
    add_grid_meta(meta, cx.grid);
    write_report(dir / "counterexample_report.json", res.report, meta);
    log << "points:";
    for (double p : res.points) log << ' ' << format_number(p);
    log << '\n';
    print_checks(res.report, log);
    return res.report.passed() ? kPass : kCheckFailure;
}

int report_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const HypothesisViolation& e) {
        err << "hypothesis violated: " << e.what() << '\n';
        return kConfigError;
    } catch (const ConvexOrderViolation& e) {
        err << "convex order violated: " << e.what() << '\n';
        return kConfigError;
    } catch (const MeanMismatch& e) {
        err << "mean mismatch: " << e.what() << '\n';
        return kConfigError;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace skorokhod::cli
