// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/spinor.hpp"

namespace dfl {

namespace {

DiracMatrixSet build_dirac()
{
    DiracMatrixSet d;
    // Upper-right and lower-left 2x2 blocks carry sigma_l.
    auto place = [](Mat4& a, cplx s00, cplx s01, cplx s10, cplx s11) {
        a(0, 2) = s00; a(0, 3) = s01; a(1, 2) = s10; a(1, 3) = s11;
        a(2, 0) = s00; a(2, 1) = s01; a(3, 0) = s10; a(3, 1) = s11;
    };
    place(d.alpha1, 1.0, 0.0, 0.0, -1.0);
    place(d.alpha2, 0.0, 1.0, 1.0, 0.0);
    place(d.alpha3, 0.0, -I, I, 0.0);
    d.beta(0, 0) = 1.0;
    d.beta(1, 1) = 1.0;
    d.beta(2, 2) = -1.0;
    d.beta(3, 3) = -1.0;
    return d;
}

}  // namespace

const DiracMatrixSet& dirac_matrices()
{
    static const DiracMatrixSet d = build_dirac();
    return d;
}

cplx inner(const Spinor4& phi, const Spinor4& chi)
{
    return std::conj(phi[0]) * chi[0] + std::conj(phi[1]) * chi[1] + std::conj(phi[2]) * chi[2]
           + std::conj(phi[3]) * chi[3];
}

double norm_s2(const Spinor4& phi)
{
    return std::norm(phi[0]) + std::norm(phi[1]) + std::norm(phi[2]) + std::norm(phi[3]);
}

double norm_s(const Spinor4& phi) { return std::sqrt(norm_s2(phi)); }

Spinor4 apply_alpha(int l, const Spinor4& p)
{
    switch (l) {
        case 0: return Spinor4{{p[2], -p[3], p[0], -p[1]}};
        case 1: return Spinor4{{p[3], p[2], p[1], p[0]}};
        default: return Spinor4{{-I * p[3], I * p[2], -I * p[1], I * p[0]}};
    }
}

Spinor4 apply_beta(const Spinor4& p) { return Spinor4{{p[0], p[1], -p[2], -p[3]}}; }

Spinor4 apply_free_hamiltonian(const Vec3& k, double m, const Spinor4& p)
{
    const cplx kp{k.y, k.z};  // k2 + i k3
    const cplx km{k.y, -k.z};
    // alpha.k acts as [[0, S],[S, 0]] with S = [[k1, k-], [k+, -k1]].
    return Spinor4{{m * p[0] + k.x * p[2] + km * p[3], m * p[1] + kp * p[2] - k.x * p[3],
                    -m * p[2] + k.x * p[0] + km * p[1], -m * p[3] + kp * p[0] - k.x * p[1]}};
}

SpinorBasisPair positive_spinors(const Vec3& k, double m)
{
    if (!(m > 0.0)) throw Error(ErrorKind::invalid_argument, "positive_spinors needs m > 0");
    SpinorBasisPair b;
    b.k = k;
    b.m = m;
    b.E = energy(k, m);
    b.Ehat = b.E + m;
    const double c = 1.0 / std::sqrt(2.0 * b.E * b.Ehat);
    const cplx kp{k.y, k.z};
    const cplx km{k.y, -k.z};
    b.s1 = Spinor4{{c * b.Ehat, 0.0, c * k.x, c * kp}};
    b.s2 = Spinor4{{0.0, c * b.Ehat, c * km, -c * k.x}};
    return b;
}

Spinor4 combine_spinors(const Vec3& k, double m, cplx f1, cplx f2)
{
    const double E = energy(k, m);
    const double Ehat = E + m;
    const double c = 1.0 / std::sqrt(2.0 * E * Ehat);
    const cplx kp{k.y, k.z};
    const cplx km{k.y, -k.z};
    return Spinor4{{c * Ehat * f1, c * Ehat * f2, c * (k.x * f1 + km * f2), c * (kp * f1 - k.x * f2)}};
}

FluxVector flux(const Spinor4& p)
{
    // <psi, alpha psi> = 2 Re(u^dagger sigma l) with u, l the upper and lower halves.
    FluxVector f;
    f.j0 = norm_s2(p);
    f.j.x = 2.0 * std::real(std::conj(p[0]) * p[2] - std::conj(p[1]) * p[3]);
    f.j.y = 2.0 * std::real(std::conj(p[0]) * p[3] + std::conj(p[1]) * p[2]);
    f.j.z = 2.0 * std::real(std::conj(p[0]) * (-I * p[3]) + std::conj(p[1]) * (I * p[2]));
    return f;
}

}  // namespace dfl
