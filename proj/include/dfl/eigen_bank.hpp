// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! A set of generalized eigenfunctions over a momentum grid, its on-disk
//! form, and the transform pair
//!
//!   psi-hat_s(k) = int (2 pi)^{-3/2} <phi~_k^s(x), psi(x)> d^3x,
//!   psi(x, t)    = sum_s int (2 pi)^{-3/2} e^{-i E_k t} phi~_k^s(x) psi-hat_s(k) d^3k.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "dfl/lippmann.hpp"
#include "dfl/momentum.hpp"

namespace dfl {

struct EigenBank {
    SpatialGrid grid;
    MomentumGrid kgrid;
    double m = 1.0;
    std::string potential;
    //! Field for (node, s) at 2 node + s - 1.
    std::vector<EigenfunctionField> fields;

    std::size_t nodes() const { return kgrid.size(); }
    const EigenfunctionField& field(std::size_t node, int s) const { return fields[2 * node + (s - 1)]; }
    //! Largest Born iteration count and last delta over the bank.
    int max_iterations() const;
    double max_last_delta() const;
};

//! Both spin channels at every node of `kgrid`, parallel over nodes.
EigenBank build_bank(const Potential& pot, const MomentumGrid& kgrid, const SpatialGrid& grid, double m,
                     const LseOptions& opt = {});

//! One file per (node, s) plus manifest.txt and kgrid.dflamp in `dir`.
void save_bank(const EigenBank& bank, const std::string& dir);
EigenBank load_bank(const std::string& dir);
//! Throws bank_mismatch unless the bank was built for these grids and mass.
void check_bank(const EigenBank& bank, const MomentumGrid& kgrid, const SpatialGrid& grid, double m);

//! Channel amplitudes on the bank's momentum grid by trapezoidal quadrature.
MomentumAmplitude generalized_fourier(const SpatialGrid& grid, std::span<const Spinor4> psi, const EigenBank& bank);

//! psi(., t) on the bank's spatial nodes.
std::vector<Spinor4> synthesize_state(const MomentumAmplitude& amp, const EigenBank& bank, double t);

//! psi(x, t) at arbitrary points; zeta off the grid comes from the direct
//! Nystrom sum zeta_k(x) = sum_x' G_k(x - x') w' A/(x') phi~_k(x').
std::vector<Spinor4> synthesize_at(const MomentumAmplitude& amp, const EigenBank& bank, const Potential& pot,
                                   std::span<const Vec3> points, double t);

}  // namespace dfl
