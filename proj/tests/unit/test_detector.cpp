// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dfl/detector.hpp"
#include "oracles.hpp"

using namespace dfl;

TEST_CASE("surface quadrature weights integrate the area")
{
    oracle::Gen g(51);
    for (int t = 0; t < 10; ++t) {
        const double R = g.uniform(1.0, 100.0);
        const ConeSpec cone(g.direction(), g.uniform(0.05, pi));
        const auto s = sphere_quadrature(R, cone, 16, 12);
        CHECK(s.total_weight() == doctest::Approx(R * R * cone.solid_angle()).epsilon(1e-12));
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(norm(s.points[i]) == doctest::Approx(R).epsilon(1e-13));
            CHECK(cone.contains(s.points[i]));
        }
    }
}

TEST_CASE("substituted crossing equals the direct time integral")
{
    const auto amp = std::make_shared<MomentumAmplitude>(
        gaussian_packet(default_packet_grid({2, 0, 0}, 0.5), {2, 0, 0}, 0.5, 1.0, {1.0, 0.0}));
    const FreeState st(amp);
    DetectorOptions opt;
    opt.cone_theta = 12;
    opt.n_phi = 8;
    opt.full_sphere = false;
    const std::vector<double> R{20};
    const auto rep = fas_sweep(st, ConeSpec({1, 0, 0}, 0.3), R, opt);
    REQUIRE(rep.rows.size() == 1);
    const auto& r = rep.rows[0];
    CHECK(std::abs(r.crossing_substituted - r.crossing_direct) <= 1e-6 * std::abs(r.crossing_direct));
    CHECK(r.abs_flux >= r.crossing_direct * (1 - 1e-12));
    CHECK(r.abs_disc == doctest::Approx(std::abs(r.crossing_direct - r.momentum_side)));
}
