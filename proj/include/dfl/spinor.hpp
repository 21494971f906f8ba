// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Dirac algebra in the standard representation with the Pauli matrices
//! ordered as sigma_1 = diag(1,-1), sigma_2 = antidiag(1,1),
//! sigma_3 = antidiag(-i,i).
#pragma once

#include "dfl/types.hpp"

namespace dfl {

struct DiracMatrixSet {
    Mat4 alpha1, alpha2, alpha3, beta;

    const Mat4& alpha(int l) const { return l == 0 ? alpha1 : (l == 1 ? alpha2 : alpha3); }
};

const DiracMatrixSet& dirac_matrices();

//! Spin-space inner product <phi, chi>, antilinear in the first slot.
cplx inner(const Spinor4& phi, const Spinor4& chi);
//! Scalar norm <phi, phi>^{1/2}.
double norm_s(const Spinor4& phi);
double norm_s2(const Spinor4& phi);

//! alpha_l psi without forming the matrix (l = 0, 1, 2).
Spinor4 apply_alpha(int l, const Spinor4& psi);
Spinor4 apply_beta(const Spinor4& psi);
//! (alpha . k + beta m) psi.
Spinor4 apply_free_hamiltonian(const Vec3& k, double m, const Spinor4& psi);

inline double energy(const Vec3& k, double m) { return std::sqrt(dot(k, k) + m * m); }
inline double energy(double kmag, double m) { return std::sqrt(kmag * kmag + m * m); }

struct SpinorBasisPair {
    Spinor4 s1, s2;
    Vec3 k;
    double m = 1.0;
    double E = 1.0;
    double Ehat = 2.0;

    const Spinor4& operator[](int s) const { return s == 0 ? s1 : s2; }
};

//! Normalised positive-energy eigenvectors of alpha.k + beta m. Requires m > 0.
SpinorBasisPair positive_spinors(const Vec3& k, double m);

//! f1 s1 + f2 s2 built without an intermediate basis object.
Spinor4 combine_spinors(const Vec3& k, double m, cplx f1, cplx f2);

struct FluxVector {
    double j0 = 0.0;
    Vec3 j;
};

//! j0 = <psi,psi>, j_l = <psi, alpha_l psi>.
FluxVector flux(const Spinor4& psi);

}  // namespace dfl
