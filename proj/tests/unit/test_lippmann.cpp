// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dfl/lippmann.hpp"
#include "oracles.hpp"

using namespace dfl;

TEST_CASE("FFT convolution matches the direct sum")
{
    const SpatialGrid grid = SpatialGrid::cube(3.0, 9);
    const Potential pot = Potential::gaussian(0.3, 1.0);
    const LseOperator op(grid, pot, 1.3, 1.0);
    CHECK(op.fft_size() >= 17);
    oracle::Gen g(71);
    std::vector<Spinor4> f(grid.size()), a(grid.size()), b(grid.size());
    for (auto& v : f) v = g.spinor();
    op.apply(f, a);
    op.apply_reference(f, b);
    double err = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        err = std::max(err, norm_s(a[i] - b[i]));
        mag = std::max(mag, norm_s(b[i]));
    }
    CHECK(err <= 1e-13 * mag);
    for (std::size_t i : {std::size_t{0}, grid.size() / 2, grid.size() - 5})
        CHECK(norm_s(op.apply_at(f, grid.node(i), static_cast<std::ptrdiff_t>(i)) - b[i]) <= 1e-13 * mag);
}

TEST_CASE("weak coupling converges monotonically and solves the fixed point")
{
    const SpatialGrid grid = SpatialGrid::cube(4.0, 16);
    const Potential pot = Potential::gaussian(0.05, 1.0);
    const auto f = born_solve(pot, {1, 0, 0}, 1, grid);
    CHECK(f.record.converged);
    CHECK(f.record.monotone());
    CHECK(f.record.last_delta <= 1e-10);
    CHECK(fixed_point_residual(f, pot, 31) <= 1e-9);
    CHECK(zeta_decay_certificate(f).passed);
    CHECK(holder_check(f, 50).bounded);
}

TEST_CASE("zeta is linear in the coupling at leading order")
{
    const SpatialGrid grid = SpatialGrid::cube(4.0, 12);
    const auto a = born_solve(Potential::gaussian(0.02, 1.0), {0.8, 0.3, 0}, 2, grid);
    const auto b = born_solve(Potential::gaussian(0.01, 1.0), {0.8, 0.3, 0}, 2, grid);
    double d = 0.0, z = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        d = std::max(d, norm_s(a.zeta[i] - cplx(2.0) * b.zeta[i]));
        z = std::max(z, norm_s(a.zeta[i]));
    }
    CHECK(d <= 0.02 * z);
}

TEST_CASE("zero potential leaves the plane wave untouched")
{
    const SpatialGrid grid = SpatialGrid::cube(3.0, 8);
    const auto f = born_solve(Potential::zero(), {1, 0, 0}, 1, grid);
    for (const auto& z : f.zeta) CHECK(norm_s(z) == 0.0);
    CHECK(f.record.converged);
}

TEST_CASE("failure paths")
{
    const SpatialGrid grid = SpatialGrid::cube(4.0, 12);
    try {
        born_solve(Potential::gaussian(10.0, 1.0), {1, 0, 0}, 1, grid);
        FAIL("strong coupling should not contract");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::no_contraction);
    }
    LseOptions opt;
    opt.max_iter = 2;
    try {
        born_solve(Potential::gaussian(0.05, 1.0), {1, 0, 0}, 1, grid, opt);
        FAIL("two iterations cannot reach 1e-10");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::tol_not_reached);
    }
    opt.allow_unconverged = true;
    CHECK_FALSE(born_solve(Potential::gaussian(0.05, 1.0), {1, 0, 0}, 1, grid, opt).record.converged);
}
