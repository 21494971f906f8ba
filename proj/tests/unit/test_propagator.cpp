// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dfl/propagator.hpp"
#include "oracles.hpp"

using namespace dfl;

namespace {
MomentumAmplitude packet()
{
    return gaussian_packet(default_packet_grid({2, 0, 0}, 0.5, 32), {2, 0, 0}, 0.5, 1.0, {1.0, 0.0});
}
}  // namespace

TEST_CASE("parallel wave sum matches the serial reference")
{
    const auto amp = packet();
    const WaveEvaluator w(amp);
    oracle::Gen g(31);
    std::vector<SpacetimePoint> pts;
    for (int i = 0; i < 20; ++i) pts.push_back({g.vec(4.0), g.uniform(0.0, 3.0)});
    const auto batch = w.batch(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Spinor4 a = w(pts[i]);
        CHECK(norm_s(a - batch[i]) == 0.0);
        CHECK(norm_s(a - w.serial_reference(pts[i])) <= 1e-13 * std::max(norm_s(a), 1e-3));
    }
}

TEST_CASE("aliasing guard")
{
    const auto amp = packet();
    const WaveEvaluator w(amp);
    CHECK_THROWS_AS(w({{2.0 * w.aliasing_radius(), 0, 0}, 0.0}), Error);
}

TEST_CASE("continuity residual is second order with the + sign")
{
    const auto amp = packet();
    const WaveEvaluator w(amp);
    const SpacetimePoint p{{1.0, 0.3, -0.2}, 0.7};
    const auto a = continuity_residual(w, p, 2e-3), b = continuity_residual(w, p, 1e-3);
    CHECK(a.plus / b.plus == doctest::Approx(4.0).epsilon(0.1));
    CHECK(b.plus < 1e-3 * b.minus);
}
