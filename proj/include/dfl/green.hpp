// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Outgoing Green kernel of E_k - H0 for the Dirac operator.
//!
//!   G(x) = (e^{ikr} / 4 pi) [ -(E + beta m)/r - k alpha.x^/r - i alpha.x^/r^2 ]
//!
//! which is (E + H0) applied to -e^{ikr}/(4 pi r); it solves
//! (E - H0) G = delta.
#pragma once

#include "dfl/types.hpp"

namespace dfl {

//! G = g0 (E + beta m) + sum_j gj alpha_j.
struct GreenScalars {
    cplx g0;
    std::array<cplx, 3> gj;
};

GreenScalars green_scalars(double k, const Vec3& x);
//! Throws singular_origin at x = 0.
Mat4 green_kernel(double k, const Vec3& x, double m);

//! Average of G over a ball of volume h^3 centred on the origin. The odd
//! alpha terms cancel, leaving -(E + beta m) int_ball e^{ikr}/(4 pi r) / h^3.
cplx green_self_cell_scalar(double k, double h);
Mat4 green_self_cell(double k, double m, double h);

//! (E + beta m) a + sum_j b_j alpha_j applied to psi.
Spinor4 apply_green_structure(double E, double m, cplx a, const std::array<cplx, 3>& b, const Spinor4& psi);

}  // namespace dfl
