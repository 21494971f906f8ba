// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/report.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "dfl/types.hpp"

namespace dfl {

void RunReport::check(std::string name, bool passed, double value, std::string rule, std::string detail)
{
    assertions.push_back({std::move(name), passed, value, std::move(rule), std::move(detail)});
}

bool RunReport::all_passed() const
{
    if (!error.empty()) return false;
    for (const auto& a : assertions)
        if (!a.passed) return false;
    return true;
}

void write_report_json(const RunReport& rep, const std::string& path)
{
    using json = nlohmann::ordered_json;
    json j;
    j["scenario"] = {{"name", rep.scenario}, {"threads", rep.threads}, {"config", rep.config}};
    json a = json::array();
    for (const auto& x : rep.assertions) {
        json e = {{"name", x.name}, {"passed", x.passed}};
        e["value"] = std::isfinite(x.value) ? json(x.value) : json(nullptr);
        e["rule"] = x.rule;
        if (!x.detail.empty()) e["detail"] = x.detail;
        a.push_back(e);
    }
    j["assertions"] = a;
    json t = json::object();
    for (const auto& [k, v] : rep.timings) t[k] = v;
    j["timings"] = t;
    j["files"] = rep.files;
    j["warnings"] = rep.warnings;
    j["passed"] = rep.all_passed();
    if (!rep.error.empty()) j["error"] = rep.error;
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::io_error, "cannot write " + path);
    os << j.dump(2) << "\n";
    if (!os) throw Error(ErrorKind::io_error, "cannot write " + path);
}

}  // namespace dfl
