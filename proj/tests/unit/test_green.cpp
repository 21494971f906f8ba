// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dfl/green.hpp"
#include "dfl/quadrature.hpp"
#include "oracles.hpp"

using namespace dfl;

TEST_CASE("kernel matches the derivative construction")
{
    oracle::Gen g(61);
    for (int t = 0; t < 100; ++t) {
        const double k = g.uniform(0.1, 4.0), m = g.uniform(0.5, 2.0);
        const Vec3 x = g.uniform(0.05, 10.0) * g.direction();
        const Mat4 a = green_kernel(k, x, m), b = oracle::green_from_derivatives(k, x, m);
        CHECK(max_abs(a - b) <= 1e-12 * max_abs(b));
    }
}

TEST_CASE("(E - H0) G vanishes away from the origin at second order")
{
    oracle::Gen g(62);
    for (int t = 0; t < 10; ++t) {
        const double k = g.uniform(0.5, 3.0);
        const Vec3 x = g.uniform(0.5, 3.0) * g.direction();
        const double r1 = oracle::dirac_residual_fd(k, 1.0, x, 1e-2), r2 = oracle::dirac_residual_fd(k, 1.0, x, 5e-3);
        CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
    }
}

TEST_CASE("singular origin")
{
    CHECK_THROWS_AS(green_scalars(1.0, {0, 0, 0}), Error);
}

TEST_CASE("self-cell average equals the ball integral")
{
    for (double k : {1e-6, 0.3, 1.0, 3.0})
        for (double h : {0.05, 0.25, 0.5}) {
            const double a = std::cbrt(3.0 / (4.0 * pi)) * h;
            const Rule r = gauss_legendre(40, 0.0, a);
            cplx s = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * r.x[i] * std::exp(cplx(0.0, k * r.x[i]));
            const cplx expect = -s / (h * h * h);
            CHECK(std::abs(green_self_cell_scalar(k, h) - expect) <= 1e-12 * std::abs(expect));
        }
}

TEST_CASE("self-cell value converges to the cell average of the kernel")
{
    // Mean of -e^{ikr}/(4 pi r) over the cube [-h/2, h/2]^3 versus the ball of equal volume.
    const double k = 1.0, h = 0.2;
    const Rule r = gauss_legendre(48, -0.5 * h, 0.5 * h);
    cplx cube = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j)
            for (std::size_t l = 0; l < r.size(); ++l) {
                const double d = std::sqrt(r.x[i] * r.x[i] + r.x[j] * r.x[j] + r.x[l] * r.x[l]);
                cube -= r.w[i] * r.w[j] * r.w[l] * std::exp(cplx(0.0, k * d)) / (4.0 * pi * d);
            }
    cube /= h * h * h;
    CHECK(std::abs(green_self_cell_scalar(k, h) - cube) <= 0.02 * std::abs(cube));
}
