// SPDX-License-Identifier: MIT
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace skorokhod::cli {

/// Process exit codes.
enum ExitCode : int { kPass = 0, kCheckFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

struct RunOptions {
    std::filesystem::path output_dir;  // overrides the config when not empty
    std::optional<double> t_eval;
};

int cmd_solve(const ScenarioConfig& cfg, const RunOptions& opt, std::ostream& log);
int cmd_embed(const ScenarioConfig& cfg, const std::filesystem::path& barrier_path, const RunOptions& opt,
              std::ostream& log);
/// suite is one of lemmas, theorem, counterexample
int cmd_verify(const ScenarioConfig& cfg, const std::string& suite, const RunOptions& opt, std::ostream& log);
int cmd_example(const ScenarioConfig& cfg, const RunOptions& opt, std::ostream& log);

/// Maps the active exception to an exit code and prints its message.
int report_exception(std::ostream& err);

}  // namespace skorokhod::cli
