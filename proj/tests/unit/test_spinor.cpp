// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dfl/spinor.hpp"
#include "oracles.hpp"

using namespace dfl;

TEST_CASE("dirac matrices anticommute")
{
    const auto& d = dirac_matrices();
    const Mat4 I = Mat4::identity();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const Mat4 ac = d.alpha(i) * d.alpha(j) + d.alpha(j) * d.alpha(i);
            CHECK(max_abs(ac - (i == j ? cplx(2.0) : cplx(0.0)) * I) == 0.0);
        }
        CHECK(max_abs(d.alpha(i) * d.beta + d.beta * d.alpha(i)) == 0.0);
        CHECK(max_abs(d.alpha(i) - adjoint(d.alpha(i))) == 0.0);
    }
    CHECK(max_abs(d.beta * d.beta - I) == 0.0);
}

TEST_CASE("apply_alpha matches the matrices")
{
    oracle::Gen g(11);
    for (int t = 0; t < 100; ++t) {
        const Spinor4 p = g.spinor();
        for (int l = 0; l < 3; ++l) CHECK(norm_s(apply_alpha(l, p) - dirac_matrices().alpha(l) * p) < 1e-15);
        CHECK(norm_s(apply_beta(p) - dirac_matrices().beta * p) < 1e-15);
    }
}

TEST_CASE("positive spinors: orthonormal eigenvectors with the flux identity")
{
    oracle::Gen g(12);
    for (int t = 0; t < 300; ++t) {
        const Vec3 k = g.vec(5.0);
        const double m = g.uniform(0.1, 3.0);
        const SpinorBasisPair b = positive_spinors(k, m);
        for (int s = 0; s < 2; ++s) {
            CHECK(std::abs(inner(b[s], b[s]) - 1.0) < 1e-12);
            CHECK(norm_s(apply_free_hamiltonian(k, m, b[s]) - cplx(b.E) * b[s]) < 1e-12 * b.E);
            const FluxVector f = flux(b[s]);
            CHECK(norm(f.j - (1.0 / b.E) * k) < 1e-12);
        }
        CHECK(std::abs(inner(b[0], b[1])) < 1e-12);
        const cplx f1 = g.complex(1.0), f2 = g.complex(1.0);
        CHECK(norm_s(combine_spinors(k, m, f1, f2) - (f1 * b[0] + f2 * b[1])) < 1e-14);
    }
}

TEST_CASE("flux of an arbitrary spinor equals <psi, alpha psi>")
{
    oracle::Gen g(13);
    for (int t = 0; t < 100; ++t) {
        const Spinor4 p = g.spinor();
        const FluxVector f = flux(p);
        for (int l = 0; l < 3; ++l) CHECK(f.j[l] == doctest::Approx(std::real(inner(p, apply_alpha(l, p)))).epsilon(1e-14));
        CHECK(f.j0 == doctest::Approx(norm_s2(p)));
    }
}

TEST_CASE("zero mass is rejected")
{
    CHECK_THROWS_AS(positive_spinors({1, 0, 0}, 0.0), Error);
}
