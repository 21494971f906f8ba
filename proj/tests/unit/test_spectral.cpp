// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dfl/propagator.hpp"
#include "dfl/spectral.hpp"
#include "oracles.hpp"

using namespace dfl;

TEST_CASE("spectral evaluator agrees with the direct node sum")
{
    const auto amp = gaussian_packet(default_packet_grid({2, 0, 0}, 0.5), {2, 0, 0}, 0.5, 1.0, {0.6, cplx(0, 0.8)});
    // The direct sum needs a box wide enough that the truncated Gaussian tail is below rounding.
    const auto wide = gaussian_packet(MomentumGrid::cartesian({2, 0, 0}, 6.0, 96), {2, 0, 0}, 0.5, 1.0, {0.6, cplx(0, 0.8)});
    const WaveEvaluator w(wide);
    std::vector<Vec3> pts{{10, 0, 0}, {8, 3, -1}, {-4, 5, 2}, {12, -2, 1}};
    const SpectralEvaluator ev(amp, pts, 20.0);
    const std::vector<double> times{0.0, 5.0, 12.0, 20.0};
    const auto vals = ev.values(times);
    const auto ref = ev.values_reference(times);
    for (std::size_t j = 0; j < times.size(); ++j)
        for (std::size_t p = 0; p < pts.size(); ++p) {
            const Spinor4 direct = w({pts[p], times[j]});
            const Spinor4& s = vals[j * pts.size() + p];
            CHECK(norm_s(s - direct) <= 1e-13 + 1e-8 * norm_s(direct));
            CHECK(norm_s(s - ref[j * pts.size() + p]) <= 1e-16 + 1e-13 * norm_s(s));
            CHECK(norm_s(s - ev.value(p, times[j])) <= 1e-16 + 1e-13 * norm_s(s));
        }
}

TEST_CASE("space-like decay profile stays bounded")
{
    const auto amp = gaussian_packet(default_packet_grid({2, 0, 0}, 0.5), {2, 0, 0}, 0.5, 1.0, {1.0, 0.0});
    const std::vector<double> xs{20, 40, 80};
    const auto rep = spacelike_decay_check(amp, 0.5, xs, {1, 0, 0});
    CHECK(rep.bounded);
    CHECK(rep.scaled.size() == 3);
}
