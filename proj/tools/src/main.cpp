// SPDX-License-Identifier: MIT
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "skorokhod/report.hpp"

int main(int argc, char** argv) {
    using namespace skorokhod::cli;

    CLI::App app{"Root barriers: solve, simulate and verify"};
    app.set_version_flag("--version", skorokhod::tool_version());
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    std::string barrier;
    std::string suite;
    std::optional<double> t_eval;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--output-dir", out_dir, "directory for output files (overrides output_dir)");
    };
    auto* solve = app.add_subcommand("solve", "solve the obstacle problem and write the barrier");
    add_common(solve);
    auto* embed = app.add_subcommand("embed", "simulate paths stopped at a barrier file");
    add_common(embed);
    embed->add_option("barrier", barrier, "barrier CSV")->required()->check(CLI::ExistingFile);
    embed->add_option("--t-eval", t_eval, "stop every path at this time at the latest");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    add_common(verify);
    verify->add_option("--suite", suite, "lemmas, theorem or counterexample")
        ->required()
        ->check(CLI::IsMember({"lemmas", "theorem", "counterexample"}));
    auto* example = app.add_subcommand("example", "build the discontinuous-barrier example");
    add_common(example);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kConfigError;
    }

    try {
        const ScenarioConfig cfg = load_config(config);
        RunOptions opt;
        opt.output_dir = out_dir;
        opt.t_eval = t_eval;
        if (*solve) return cmd_solve(cfg, opt, std::cout);
        if (*embed) return cmd_embed(cfg, barrier, opt, std::cout);
        if (*verify) return cmd_verify(cfg, suite, opt, std::cout);
        return cmd_example(cfg, opt, std::cout);
    } catch (...) {
        return report_exception(std::cerr);
    }
}
