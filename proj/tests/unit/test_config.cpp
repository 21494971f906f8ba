// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dfl/config.hpp"

using namespace dfl;

namespace {
ErrorKind kind_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error for: " << text);
    return ErrorKind::invalid_argument;
}
}  // namespace

TEST_CASE("empty input gives the defaults")
{
    const ScenarioConfig c = parse_config("");
    CHECK(c.scenario == "free-fas");
    CHECK(echo_config(c) == echo_config(ScenarioConfig{}));
}

TEST_CASE("vector and list values")
{
    const ScenarioConfig c = parse_config("packet.k0 = 2 0 0\n# comment\n\ndetector.R_list = 10 20\nrun.scenario = cones-scaling\n");
    CHECK(c.k0.x == 2.0);
    CHECK(c.k0.y == 0.0);
    CHECK(c.R_list == std::vector<double>{10, 20});
    CHECK(c.scenario == "cones-scaling");
}

TEST_CASE("errors")
{
    CHECK(kind_of("cone.half_angle = -1") == ErrorKind::validation_error);
    CHECK(kind_of("cone.colour = 3") == ErrorKind::parse_error);
    CHECK(kind_of("packet.k0 = 2 0") == ErrorKind::parse_error);
    CHECK(kind_of("packet.sigma = abc") == ErrorKind::parse_error);
    CHECK(kind_of("detector.R_list = 60 30") == ErrorKind::validation_error);
    CHECK(kind_of("run.scenario = nope") == ErrorKind::validation_error);
    CHECK(kind_of("no equals sign") == ErrorKind::parse_error);
    try {
        parse_config("packet.sigma = 0.5\n\nbogus.key = 1\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("printed defaults and echoes parse back")
{
    CHECK(echo_config(parse_config(print_defaults())) == echo_config(ScenarioConfig{}));
    ScenarioConfig c;
    c.scenario = "potential-fas";
    c.coupling = 0.02;
    c.lambda_list = {10, 30};
    c.spin_mix = {cplx(0.6, 0.1), cplx(0.0, -0.8)};
    CHECK(echo_config(parse_config(echo_config(c))) == echo_config(c));
}
