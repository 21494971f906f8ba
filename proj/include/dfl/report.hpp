// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Per-run report, written as report.json with the keys scenario,
//! assertions, timings and files.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dfl {

struct Assertion {
    std::string name;
    bool passed = false;
    double value = 0.0;
    //! Human-readable acceptance rule, e.g. "<= 0.05".
    std::string rule;
    std::string detail;
};

struct RunReport {
    std::string scenario;
    //! Effective configuration in grammar form.
    std::string config;
    int threads = 1;
    std::vector<Assertion> assertions;
    std::vector<std::pair<std::string, double>> timings;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
    //! Set when the run stopped on an error.
    std::string error;

    void check(std::string name, bool passed, double value, std::string rule, std::string detail = {});
    bool all_passed() const;
};

void write_report_json(const RunReport& rep, const std::string& path);

}  // namespace dfl
