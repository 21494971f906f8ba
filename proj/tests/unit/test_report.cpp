// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>

#include "dfl/config.hpp"
#include "dfl/scenario.hpp"

using namespace dfl;

TEST_CASE("report.json keys and unique assertions")
{
    const auto dir = std::filesystem::temp_directory_path() / "dfl_test_report";
    std::filesystem::remove_all(dir);
    ScenarioConfig c = parse_config("run.scenario = continuity-suite\ncontinuity.points = 4\n");
    const RunReport rep = run_scenario(c, dir.string());
    std::ifstream is(dir / "report.json");
    const auto j = nlohmann::json::parse(is);
    for (const char* key : {"scenario", "assertions", "timings", "files"}) CHECK(j.contains(key));
    CHECK(j["scenario"]["name"] == "continuity-suite");
    std::set<std::string> names;
    for (const auto& a : j["assertions"]) CHECK(names.insert(a["name"].get<std::string>()).second);
    CHECK(names.size() == rep.assertions.size());
    CHECK(j["passed"].get<bool>() == rep.all_passed());
    std::filesystem::remove_all(dir);
}

TEST_CASE("module errors surface in the report")
{
    const auto dir = std::filesystem::temp_directory_path() / "dfl_test_report_err";
    std::filesystem::remove_all(dir);
    ScenarioConfig c = parse_config("run.scenario = potential-fas\npotential.coupling = 10\nlse.bank_n = 2\n");
    const RunReport rep = run_scenario(c, dir.string());
    CHECK(rep.error.find("no-contraction") != std::string::npos);
    CHECK_FALSE(rep.all_passed());
    std::ifstream is(dir / "report.json");
    CHECK(nlohmann::json::parse(is).contains("error"));
    std::filesystem::remove_all(dir);
}
