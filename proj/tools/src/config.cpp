// SPDX-License-Identifier: MIT
#include "config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "skorokhod/errors.hpp"
#include "skorokhod/report.hpp"

namespace skorokhod::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    expect_object(j, path);
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
        if (!allowed.contains(k)) fail(join(path, k), "unknown key");
    }
}

const json& require(const json& j, const std::string& path, const std::string& key) {
    expect_object(j, path);
    const auto it = j.find(key);
    if (it == j.end()) fail(join(path, key), "missing required key");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    fail(path, "expected a number");
}

double number(const json& j, const std::string& path, const std::string& key) {
    return as_number(require(j, path, key), join(path, key));
}

double number_or(const json& j, const std::string& path, const std::string& key, double fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : as_number(*it, join(path, key));
}

double positive(double v, const std::string& path) {
    if (!(v > 0.0) || std::isnan(v)) fail(path, "must be > 0");
    return v;
}

double finite(double v, const std::string& path) {
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

std::int64_t as_integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
    }
    fail(path, "expected an integer");
}

std::int64_t integer_or(const json& j, const std::string& path, const std::string& key, std::int64_t fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : as_integer(*it, join(path, key));
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

bool bool_or(const json& j, const std::string& path, const std::string& key, bool fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) fail(join(path, key), "expected true or false");
    return it->get<bool>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], index_path(path, i)));
    return out;
}

/// Resolves named and inline measure definitions, detecting cycles.
class MeasureResolver {
public:
    explicit MeasureResolver(const json& defs) : defs_(defs) {}

    Measure named(const std::string& name, const std::string& ref_path) {
        if (auto it = done_.find(name); it != done_.end()) return it->second;
        const auto def = defs_.find(name);
        if (def == defs_.end()) fail(ref_path, "unknown measure '" + name + "'");
        if (active_.contains(name)) fail(ref_path, "measure '" + name + "' refers to itself");
        active_.insert(name);
        Measure m = build(*def, "measures." + name);
        active_.erase(name);
        done_.emplace(name, m);
        return m;
    }

    /// `of` may be a measure name or an inline definition
    Measure operand(const json& v, const std::string& path) {
        if (v.is_string()) return named(v.get<std::string>(), path);
        return build(v, path);
    }

    Measure build(const json& j, const std::string& path) {
        const std::string type = as_string(require(j, path, "type"), join(path, "type"));
        try {
            if (type == "dirac") {
                allow_keys(j, path, {"type", "at", "mass"});
                return Measure::dirac(finite(number(j, path, "at"), join(path, "at")),
                                      positive(number_or(j, path, "mass", 1.0), join(path, "mass")));
            }
            if (type == "atoms") {
                allow_keys(j, path, {"type", "points"});
                const auto& pts = require(j, path, "points");
                if (!pts.is_array() || pts.empty()) fail(join(path, "points"), "expected a non-empty array of [x, mass]");
                std::vector<Atom> atoms;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    const auto p = index_path(join(path, "points"), i);
                    const auto xw = number_list(pts[i], p);
                    if (xw.size() != 2) fail(p, "expected [x, mass]");
                    atoms.push_back({finite(xw[0], p), positive(xw[1], p)});
                }
                return Measure::from_parts(std::move(atoms), {});
            }
            if (type == "uniform") {
                allow_keys(j, path, {"type", "a", "b"});
                return Measure::uniform(number(j, path, "a"), number(j, path, "b"));
            }
            if (type == "gaussian") {
                allow_keys(j, path, {"type", "mean", "sd"});
                const double sd = positive(number_or(j, path, "sd", 1.0), join(path, "sd"));
                return Measure::gaussian(number_or(j, path, "mean", 0.0), sd * sd);
            }
            if (type == "tent") {
                allow_keys(j, path, {"type", "a", "b", "lambda", "p"});
                return Measure::tent(number(j, path, "a"), number(j, path, "b"), number(j, path, "lambda"),
                                     number(j, path, "p"));
            }
            if (type == "mixture") {
                allow_keys(j, path, {"type", "of", "a", "b", "cells"});
                const Measure nu = operand(require(j, path, "of"), join(path, "of"));
                return mixture_measure(nu, number(j, path, "a"), number(j, path, "b"),
                                       static_cast<int>(integer_or(j, path, "cells", 64)));
            }
            if (type == "restrict") {
                allow_keys(j, path, {"type", "of", "a", "b"});
                const Measure m = operand(require(j, path, "of"), join(path, "of"));
                return m.restricted(number_or(j, path, "a", -kInf), number_or(j, path, "b", kInf));
            }
            if (type == "sum") {
                allow_keys(j, path, {"type", "of"});
                const auto& parts = require(j, path, "of");
                if (!parts.is_array() || parts.empty()) fail(join(path, "of"), "expected a non-empty array");
                std::vector<Measure> ms;
                for (std::size_t i = 0; i < parts.size(); ++i) ms.push_back(operand(parts[i], index_path(join(path, "of"), i)));
                return Measure::sum(ms);
            }
            if (type == "scale") {
                allow_keys(j, path, {"type", "of", "factor"});
                const Measure m = operand(require(j, path, "of"), join(path, "of"));
                return m.scaled(positive(number(j, path, "factor"), join(path, "factor")));
            }
            if (type == "normalize") {
                allow_keys(j, path, {"type", "of"});
                return operand(require(j, path, "of"), join(path, "of")).normalized();
            }
            if (type == "affine") {
                allow_keys(j, path, {"type", "of", "shift", "scale"});
                const Measure m = operand(require(j, path, "of"), join(path, "of"));
                return m.affine_image(number_or(j, path, "shift", 0.0), number_or(j, path, "scale", 1.0));
            }
            if (type == "counterexample") {
                allow_keys(j, path, {"type", "x", "n_intervals", "cells"});
                return counterexample_measure(number_or(j, path, "x", 0.0),
                                              static_cast<int>(integer_or(j, path, "n_intervals", 3)),
                                              static_cast<int>(integer_or(j, path, "cells", 64)));
            }
        } catch (const InvalidArgument& e) {
            fail(path, e.what());
        }
        fail(join(path, "type"), "unknown measure type '" + type + "'");
    }

private:
    const json& defs_;
    std::map<std::string, Measure> done_;
    std::set<std::string> active_;
};

Domain parse_domain(const json& j, const std::string& path) {
    const auto lim = number_list(j, path);
    if (lim.size() != 2 || !(lim[0] < lim[1])) fail(path, "expected [lo, hi] with lo < hi");
    return Domain{lim[0], lim[1]};
}

DiffusionSpec parse_diffusion(const json& j, const std::string& path) {
    const std::string kind = as_string(require(j, path, "kind"), join(path, "kind"));
    try {
        if (kind == "brownian") {
            allow_keys(j, path, {"kind"});
            return DiffusionSpec::brownian();
        }
        if (kind == "geometric") {
            allow_keys(j, path, {"kind"});
            return DiffusionSpec::geometric();
        }
        if (kind == "affine") {
            allow_keys(j, path, {"kind", "alpha", "beta", "domain", "k"});
            Domain dom;
            if (j.contains("domain")) dom = parse_domain(j["domain"], join(path, "domain"));
            return DiffusionSpec::affine(number(j, path, "alpha"), number_or(j, path, "beta", 0.0), dom,
                                         number_or(j, path, "k", -1.0));
        }
        if (kind == "table") {
            allow_keys(j, path, {"kind", "t_grid", "x_grid", "values", "domain", "k"});
            SigmaTable t;
            t.t_grid = number_list(require(j, path, "t_grid"), join(path, "t_grid"));
            t.x_grid = number_list(require(j, path, "x_grid"), join(path, "x_grid"));
            t.values = number_list(require(j, path, "values"), join(path, "values"));
            Domain dom;
            if (j.contains("domain")) dom = parse_domain(j["domain"], join(path, "domain"));
            return DiffusionSpec::table(std::move(t), dom, positive(number(j, path, "k"), join(path, "k")));
        }
    } catch (const InvalidArgument& e) {
        fail(path, e.what());
    }
    fail(join(path, "kind"), "unknown diffusion kind '" + kind + "'");
}

void apply_grid(const json& j, const std::string& path, SolveGrid& g) {
    allow_keys(j, path,
               {"x_min", "x_max", "n_x", "t_cap", "n_t", "theta", "psor_tol", "psor_max_iters", "omega", "contact_tol",
                "embed_tol", "auto_widen"});
    g.x_min = number_or(j, path, "x_min", g.x_min);
    g.x_max = number_or(j, path, "x_max", g.x_max);
    g.n_x = static_cast<int>(integer_or(j, path, "n_x", g.n_x));
    g.t_cap = number_or(j, path, "t_cap", g.t_cap);
    g.n_t = static_cast<int>(integer_or(j, path, "n_t", g.n_t));
    g.theta = number_or(j, path, "theta", g.theta);
    g.psor_tol = number_or(j, path, "psor_tol", g.psor_tol);
    g.psor_max_iters = static_cast<int>(integer_or(j, path, "psor_max_iters", g.psor_max_iters));
    g.omega = number_or(j, path, "omega", g.omega);
    g.contact_tol = number_or(j, path, "contact_tol", g.contact_tol);
    g.embed_tol = number_or(j, path, "embed_tol", g.embed_tol);
    g.auto_widen = bool_or(j, path, "auto_widen", g.auto_widen);
    try {
        g.validate();
    } catch (const InvalidArgument& e) {
        fail(path, e.what());
    }
}

SimParams parse_sim(const json& j, const std::string& path) {
    allow_keys(j, path, {"dt", "n_paths", "seed", "t_cap", "t_eval", "threads", "refine_iters"});
    SimParams p;
    p.dt = positive(number_or(j, path, "dt", p.dt), join(path, "dt"));
    p.n_paths = integer_or(j, path, "n_paths", p.n_paths);
    if (p.n_paths <= 0) fail(join(path, "n_paths"), "must be > 0");
    const auto& seed = require(j, path, "seed");
    const auto s = as_integer(seed, join(path, "seed"));
    if (s < 0) fail(join(path, "seed"), "must be >= 0");
    p.seed = static_cast<std::uint64_t>(s);
    p.t_cap = finite(positive(number_or(j, path, "t_cap", p.t_cap), join(path, "t_cap")), join(path, "t_cap"));
    p.t_eval = number_or(j, path, "t_eval", kInf);
    if (!(p.t_eval >= 0.0)) fail(join(path, "t_eval"), "must be >= 0");
    p.threads = static_cast<int>(integer_or(j, path, "threads", 0));
    p.refine_iters = static_cast<int>(integer_or(j, path, "refine_iters", p.refine_iters));
    return p;
}

IntervalSet parse_A(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of [lo, hi]");
    IntervalSet out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto p = index_path(path, i);
        const auto lh = number_list(j[i], p);
        if (lh.size() != 2 || !(lh[0] <= lh[1])) fail(p, "expected [lo, hi] with lo <= hi");
        out.push_back(Interval{lh[0], lh[1], true, true});
    }
    return out;
}

CheckDecl parse_check(const json& j, const std::string& path, const std::map<std::string, Measure>& measures) {
    CheckDecl c;
    c.path = path;
    const std::string kind = as_string(require(j, path, "kind"), join(path, "kind"));
    if (kind == "corridor_monotonicity" || kind == "corridor_bound") {
        const bool bound = kind == "corridor_bound";
        if (bound) {
            allow_keys(j, path, {"kind", "x", "y", "s", "t", "A"});
            c.corridor.A = parse_A(require(j, path, "A"), join(path, "A"));
        } else {
            allow_keys(j, path, {"kind", "x", "y", "s", "t"});
        }
        c.kind = bound ? CheckKind::corridor_bound : CheckKind::corridor_monotonicity;
        c.corridor.x = number(j, path, "x");
        c.corridor.y = number(j, path, "y");
        c.corridor.t = number(j, path, "t");
        c.corridor.s = number_or(j, path, "s", c.corridor.t);
        return c;
    }
    if (kind == "density_scan") {
        allow_keys(j, path, {"kind", "measure", "side", "x", "eps", "ys", "within_embedding", "expect_zero"});
        c.kind = CheckKind::density_scan;
        c.measure = j.contains("measure") ? as_string(j["measure"], join(path, "measure")) : "target";
        if (c.measure != "target" && !measures.contains(c.measure))
            fail(join(path, "measure"), "unknown measure '" + c.measure + "'");
        const std::string side = j.contains("side") ? as_string(j["side"], join(path, "side")) : "right";
        if (side == "right") {
            c.side = ScanSide::right;
        } else if (side == "sym") {
            c.side = ScanSide::sym;
        } else {
            fail(join(path, "side"), "expected 'right' or 'sym'");
        }
        c.x = number(j, path, "x");
        c.eps = number_list(require(j, path, "eps"), join(path, "eps"));
        if (j.contains("ys")) {
            c.ys = number_list(j["ys"], join(path, "ys"));
        } else {
            c.ys.assign(c.eps.size(), c.x);
        }
        if (c.ys.size() != c.eps.size()) fail(join(path, "ys"), "needs one entry per eps");
        c.within_embedding = bool_or(j, path, "within_embedding", false);
        c.expect_zero = bool_or(j, path, "expect_zero", false);
        return c;
    }
    if (kind == "atom_consistency") {
        allow_keys(j, path, {"kind"});
        c.kind = CheckKind::atom_consistency;
        return c;
    }
    if (kind == "tail_zero") {
        allow_keys(j, path, {"kind", "x", "side"});
        c.kind = CheckKind::tail_zero;
        c.x = number(j, path, "x");
        const std::string side = j.contains("side") ? as_string(j["side"], join(path, "side")) : "right";
        if (side == "right") {
            c.tail_side = Side::right;
        } else if (side == "left") {
            c.tail_side = Side::left;
        } else {
            fail(join(path, "side"), "expected 'right' or 'left'");
        }
        return c;
    }
    fail(join(path, "kind"), "unknown check kind '" + kind + "'");
}

}  // namespace

EmbeddingProblem ScenarioConfig::problem() const {
    return EmbeddingProblem{measures.at(initial), measures.at(target), diffusion};
}

const SimParams& ScenarioConfig::sim_params() const {
    if (!sim) throw ConfigError("sim: block with a seed is required for Monte Carlo runs");
    return *sim;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source_name) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports "parse error at line L, column C: ..."
        std::string msg = e.what();
        const auto pos = msg.find("parse error");
        throw ConfigError(source_name + ": " + (pos == std::string::npos ? msg : msg.substr(pos)));
    }
    allow_keys(root, "", {"name", "measures", "problem", "diffusion", "grid", "sim", "embed", "checks", "theorem",
                          "counterexample", "output_dir", "surface"});

    ScenarioConfig cfg;
    cfg.hash = fnv1a_hex(text);
    cfg.name = root.contains("name") ? as_string(root["name"], "name") : "scenario";

    const auto& defs = require(root, "", "measures");
    expect_object(defs, "measures");
    MeasureResolver resolver(defs);
    for (const auto& [name, def] : defs.items()) cfg.measures.emplace(name, resolver.named(name, "measures." + name));

    if (root.contains("problem")) {
        const auto& p = root["problem"];
        allow_keys(p, "problem", {"initial", "target"});
        cfg.initial = as_string(require(p, "problem", "initial"), "problem.initial");
        cfg.target = as_string(require(p, "problem", "target"), "problem.target");
    } else {
        cfg.initial = "initial";
        cfg.target = "target";
    }
    if (!cfg.measures.contains(cfg.initial)) fail("problem.initial", "unknown measure '" + cfg.initial + "'");
    if (!cfg.measures.contains(cfg.target)) fail("problem.target", "unknown measure '" + cfg.target + "'");

    cfg.diffusion = root.contains("diffusion") ? parse_diffusion(root["diffusion"], "diffusion") : DiffusionSpec::brownian();
    if (root.contains("grid")) apply_grid(root["grid"], "grid", cfg.grid);
    if (root.contains("sim")) cfg.sim = parse_sim(root["sim"], "sim");

    if (root.contains("embed")) {
        const auto& e = root["embed"];
        allow_keys(e, "embed", {"ks_threshold", "max_unstopped_rate"});
        if (e.contains("ks_threshold")) cfg.embed.ks_threshold = positive(number(e, "embed", "ks_threshold"), "embed.ks_threshold");
        cfg.embed.max_unstopped_rate = number_or(e, "embed", "max_unstopped_rate", cfg.embed.max_unstopped_rate);
    }

    if (root.contains("checks")) {
        const auto& list = root["checks"];
        if (!list.is_array()) fail("checks", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) cfg.checks.push_back(parse_check(list[i], index_path("checks", i), cfg.measures));
    }
    const bool needs_seed = std::any_of(cfg.checks.begin(), cfg.checks.end(), [](const CheckDecl& c) {
        return c.kind == CheckKind::corridor_monotonicity || c.kind == CheckKind::corridor_bound;
    });
    if (needs_seed && !cfg.sim) fail("sim.seed", "required when Monte Carlo checks are declared");

    if (root.contains("theorem")) {
        const auto& t = root["theorem"];
        allow_keys(t, "theorem", {"grids"});
        const auto& grids = require(t, "theorem", "grids");
        if (!grids.is_array() || grids.size() < 2) fail("theorem.grids", "expected at least two grids");
        for (std::size_t i = 0; i < grids.size(); ++i) {
            SolveGrid g = cfg.grid;
            apply_grid(grids[i], index_path("theorem.grids", i), g);
            cfg.theorem_grids.push_back(g);
        }
    }

    if (root.contains("counterexample")) {
        const auto& c = root["counterexample"];
        allow_keys(c, "counterexample", {"x", "n_intervals", "mixture_cells", "grid"});
        cfg.counterexample.x = finite(number_or(c, "counterexample", "x", 0.0), "counterexample.x");
        cfg.counterexample.n_intervals = static_cast<int>(integer_or(c, "counterexample", "n_intervals", 3));
        if (cfg.counterexample.n_intervals < 3 || cfg.counterexample.n_intervals > 40)
            fail("counterexample.n_intervals", "must be in [3, 40]");
        cfg.counterexample.mixture_cells = static_cast<int>(integer_or(c, "counterexample", "mixture_cells", 64));
        if (cfg.counterexample.mixture_cells < 1) fail("counterexample.mixture_cells", "must be >= 1");
        if (c.contains("grid")) apply_grid(c["grid"], "counterexample.grid", cfg.counterexample.grid);
    }

    if (root.contains("output_dir")) cfg.output_dir = as_string(root["output_dir"], "output_dir");
    if (root.contains("surface")) {
        const auto& s = root["surface"];
        allow_keys(s, "surface", {"write", "stride"});
        cfg.write_surface = bool_or(s, "surface", "write", false);
        const auto stride = integer_or(s, "surface", "stride", 1);
        if (stride < 1) fail("surface.stride", "must be >= 1");
        cfg.surface_stride = static_cast<std::size_t>(stride);
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

}  // namespace skorokhod::cli
