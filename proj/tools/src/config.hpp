// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skorokhod/diffusion.hpp"
#include "skorokhod/measure.hpp"
#include "skorokhod/obstacle_solver.hpp"
#include "skorokhod/verify.hpp"

namespace skorokhod::cli {

enum class CheckKind { corridor_monotonicity, corridor_bound, density_scan, atom_consistency, tail_zero };

enum class ScanSide { right, sym };

/// One entry of the `checks` list.
struct CheckDecl {
    CheckKind kind = CheckKind::corridor_monotonicity;
    std::string path;  // key path in the config, for messages
    CorridorSpec corridor;
    // density_scan
    std::string measure;
    ScanSide side = ScanSide::right;
    double x = 0.0;
    std::vector<double> eps;
    std::vector<double> ys;
    bool within_embedding = false;
    bool expect_zero = false;
    // tail_zero
    Side tail_side = Side::right;
};

struct EmbedSettings {
    std::optional<double> ks_threshold;
    double max_unstopped_rate = 1e-3;
};

struct CounterexampleSettings {
    double x = 0.0;
    int n_intervals = 3;
    int mixture_cells = 64;
    SolveGrid grid = counterexample_grid();
};

struct ScenarioConfig {
    std::string name;
    /// FNV-1a of the file bytes
    std::string hash;
    std::map<std::string, Measure> measures;
    std::string initial;
    std::string target;
    DiffusionSpec diffusion;
    SolveGrid grid;
    std::optional<SimParams> sim;
    EmbedSettings embed;
    std::vector<CheckDecl> checks;
    std::vector<SolveGrid> theorem_grids;
    CounterexampleSettings counterexample;
    std::filesystem::path output_dir = ".";
    bool write_surface = false;
    std::size_t surface_stride = 1;

    [[nodiscard]] EmbeddingProblem problem() const;
    /// Throws ConfigError when no sim block with a seed is present.
    [[nodiscard]] const SimParams& sim_params() const;
};

/// Parses a JSON scenario document. Syntax errors report line and column,
/// semantic errors the key path (e.g. `measures.target.sd`).
[[nodiscard]] ScenarioConfig parse_config(const std::string& text, const std::string& source_name = "<config>");

[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace skorokhod::cli
