// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! dflux: run one scenario and write its CSV files and report.json.
//!
//! Exit status: 0 when every assertion passed, 1 when one failed, 2 on a
//! configuration, argument or module error.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "dfl/config.hpp"
#include "dfl/scenario.hpp"
#include "dfl/types.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Flux-across-surfaces checks for free and scattered Dirac wave packets"};
    std::string config_path, scenario, out_dir;
    int threads = 0;
    bool defaults = false;
    app.add_option("--config", config_path, "Configuration file (section.key = value)")->check(CLI::ExistingFile);
    app.add_option("--scenario", scenario, "Scenario to run; overrides run.scenario")
        ->check(CLI::IsMember(dfl::scenario_names()));
    app.add_option("--out-dir", out_dir, "Output directory; overrides DFL_OUT_DIR and run.out_dir");
    app.add_option("--threads", threads, "OpenMP threads; overrides run.threads")->check(CLI::PositiveNumber);
    app.add_flag("--print-defaults", defaults, "Print the default configuration and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (defaults) {
        std::cout << dfl::print_defaults();
        return 0;
    }

    try {
        dfl::ScenarioConfig cfg = config_path.empty() ? dfl::ScenarioConfig{} : dfl::load_config(config_path);
        if (!scenario.empty()) cfg.scenario = scenario;
        if (threads > 0) cfg.threads = threads;
        if (out_dir.empty()) {
            const char* env = std::getenv("DFL_OUT_DIR");
            out_dir = (env && *env) ? env : cfg.out_dir;
        }
        cfg.out_dir = out_dir;

        const dfl::RunReport rep = dfl::run_scenario(cfg, out_dir);
        for (const auto& a : rep.assertions)
            std::printf("%-32s %s  value=%.6g  (%s)\n", a.name.c_str(), a.passed ? "PASS" : "FAIL", a.value,
                        a.rule.c_str());
        for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        std::printf("report: %s/report.json\n", out_dir.c_str());
        if (!rep.error.empty()) {
            std::fprintf(stderr, "error: %s\n", rep.error.c_str());
            return 2;
        }
        return rep.all_passed() ? 0 : 1;
    } catch (const dfl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
