// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/green.hpp"

#include "dfl/spinor.hpp"

namespace dfl {

GreenScalars green_scalars(double k, const Vec3& x)
{
    const double r = norm(x);
    if (!(r > 0.0)) throw Error(ErrorKind::singular_origin, "Green kernel is singular at x = 0");
    const cplx e = std::polar(1.0 / (4.0 * pi), k * r);
    GreenScalars g;
    g.g0 = -e / r;
    const cplx radial = e * cplx(-k / r, -1.0 / (r * r));
    for (int j = 0; j < 3; ++j) g.gj[j] = radial * (x[j] / r);
    return g;
}

Mat4 green_kernel(double k, const Vec3& x, double m)
{
    const GreenScalars g = green_scalars(k, x);
    const auto& d = dirac_matrices();
    const double E = energy(k, m);
    Mat4 G = (g.g0 * E) * Mat4::identity() + (g.g0 * m) * d.beta;
    for (int j = 0; j < 3; ++j) G = G + g.gj[j] * d.alpha(j);
    return G;
}

cplx green_self_cell_scalar(double k, double h)
{
    // Ball of equal volume: (4 pi / 3) a^3 = h^3.
    const double a = std::cbrt(3.0 / (4.0 * pi)) * h;
    // int_0^a r e^{ikr} dr
    cplx radial;
    if (k * a < 1.0) {
        // a^2 sum_n (ika)^n / (n! (n + 2))
        const cplx ika(0.0, k * a);
        cplx term = 1.0, sum = 0.0;
        for (int n = 0; n < 24; ++n) {
            sum += term / double(n + 2);
            term *= ika / double(n + 1);
        }
        radial = a * a * sum;
    } else {
        const cplx eika = std::polar(1.0, k * a);
        radial = a * eika / cplx(0.0, k) + (eika - 1.0) / (k * k);
    }
    return -radial / (h * h * h);
}

Mat4 green_self_cell(double k, double m, double h)
{
    const cplx s = green_self_cell_scalar(k, h);
    const double E = energy(k, m);
    return (s * E) * Mat4::identity() + (s * m) * dirac_matrices().beta;
}

Spinor4 apply_green_structure(double E, double m, cplx a, const std::array<cplx, 3>& b, const Spinor4& psi)
{
    Spinor4 out;
    out[0] = a * (E + m) * psi[0];
    out[1] = a * (E + m) * psi[1];
    out[2] = a * (E - m) * psi[2];
    out[3] = a * (E - m) * psi[3];
    for (int l = 0; l < 3; ++l)
        if (b[l] != 0.0) axpy(out, b[l], apply_alpha(l, psi));
    return out;
}

}  // namespace dfl
