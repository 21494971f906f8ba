// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "dfl/momentum.hpp"
#include "oracles.hpp"

using namespace dfl;

TEST_CASE("default packet is normalised and centred")
{
    const auto amp = gaussian_packet(default_packet_grid({2, 0, 0}, 0.5), {2, 0, 0}, 0.5, 1.0, {1.0, 0.0});
    CHECK(amp.probability() == doctest::Approx(1.0).epsilon(1e-12));
    const Vec3 mk = amp.mean_momentum();
    CHECK(mk.x == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(mk.y) < 1e-12);
    CHECK(amp.has_profile());
}

TEST_CASE("cone and complement partition the probability")
{
    oracle::Gen g(21);
    for (int t = 0; t < 10; ++t) {
        const auto amp = oracle::random_packet(g);
        const ConeSpec cone(g.direction(), g.uniform(0.1, 3.0));
        const double a = momentum_side(amp, cone), b = momentum_side(amp, cone.complement());
        CHECK(a + b == doctest::Approx(amp.probability()).epsilon(1e-12));
        CHECK(std::abs(covariant_momentum_side(amp, cone) - a) <= 1e-12);
    }
    CHECK(momentum_side(oracle::random_packet(g), ConeSpec({0, 0, 1}, pi)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cartesian direction filter converges to the cone-aligned value")
{
    const ConeSpec cone({1, 0, 0}, 0.3);
    auto packet = [](int n) { return gaussian_packet(default_packet_grid({2, 0, 0}, 0.5, n), {2, 0, 0}, 0.5, 1.0, {1.0, 0.0}); };
    const auto coarse = packet(48), fine = packet(96);
    const double resolved = momentum_side_resolved(coarse, cone);
    CHECK(resolved == doctest::Approx(momentum_side_resolved(fine, cone)).epsilon(1e-9));
    CHECK(std::abs(momentum_side(fine, cone) - resolved) < 0.6 * std::abs(momentum_side(coarse, cone) - resolved));
    CHECK(momentum_side(fine, cone) == doctest::Approx(resolved).epsilon(1e-2));
}

TEST_CASE("amplitude binary and csv round trips")
{
    oracle::Gen g(22);
    const auto amp = oracle::random_packet(g, 8);
    const auto dir = std::filesystem::temp_directory_path() / "dfl_test_momentum";
    std::filesystem::create_directories(dir);
    const std::string bin = (dir / "a.dflamp").string(), csv = (dir / "a.csv").string();
    save_amplitude_binary(amp, bin);
    const auto back = load_amplitude_binary(bin);
    REQUIRE(back.size() == amp.size());
    CHECK(back.m == amp.m);
    for (std::size_t i = 0; i < amp.size(); ++i) {
        CHECK(back.f1[i] == amp.f1[i]);
        CHECK(back.f2[i] == amp.f2[i]);
        CHECK(back.grid.weights[i] == amp.grid.weights[i]);
    }
    save_amplitude_csv(amp, csv);
    const auto c = load_amplitude_csv(csv, amp.m);
    REQUIRE(c.size() == amp.size());
    for (std::size_t i = 0; i < amp.size(); ++i) CHECK(c.f1[i] == amp.f1[i]);
    CHECK_THROWS_AS(load_amplitude_binary((dir / "missing").string()), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("class G report does not flag a well-contained packet")
{
    const auto amp = gaussian_packet(default_packet_grid({2, 0, 0}, 0.5), {2, 0, 0}, 0.5, 1.0, {1.0, 0.0});
    CHECK_FALSE(class_g_report(amp).flagged);
}
