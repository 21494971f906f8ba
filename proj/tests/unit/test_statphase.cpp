// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dfl/statphase.hpp"
#include "oracles.hpp"

using namespace dfl;

TEST_CASE("stationary point has vanishing phase gradient")
{
    oracle::Gen g(41);
    for (int t = 0; t < 200; ++t) {
        PhaseParams p;
        p.m = g.uniform(0.3, 3.0);
        p.y = g.uniform(0.01, 0.95) * g.direction();
        const auto k = k_stationary(p);
        REQUIRE(k.has_value());
        CHECK(norm(phase_gradient(p, *k)) <= 1e-10);
    }
    PhaseParams far;
    far.y = {1.5, 0, 0};
    CHECK_FALSE(k_stationary(far).has_value());
}

TEST_CASE("brute force kernel matches its serial reference")
{
    PhaseParams p;
    p.y = {0.6, 0, 0};
    p.mu = 25.0;
    ChiSpec chi;
    chi.center = *k_stationary(p);
    const MomentumGrid grid = statphase_grid(p, chi.center, chi.radius);
    const SpinorSamples s = sample(grid, [&](const Vec3& k) { return chi(k); });
    const Spinor4 a = oscillatory_bruteforce(p, s), b = oscillatory_bruteforce_reference(p, s);
    CHECK(norm_s(a - b) <= 1e-13 * norm_s(a));
}

TEST_CASE("leading term error shrinks faster than the leading term")
{
    PhaseParams p;
    p.y = {0.6, 0, 0};
    ChiSpec chi;
    chi.center = *k_stationary(p);
    const std::vector<double> mu{25, 50, 100};
    const auto rep = error_scaling(p, mu, chi);
    CHECK(rep.has_stationary_point);
    CHECK(rep.leading_slope == doctest::Approx(-1.5).epsilon(1e-6));
    CHECK(rep.slope < -1.7);
}
