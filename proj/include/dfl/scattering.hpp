// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Scattering state of an external potential, evaluated at detector
//! distance through the generalized eigenfunction expansion
//!
//!   psi(x, t) = sum_s int (2 pi)^{-3/2} e^{-i E_k t} (phi_k^s + zeta_k^s)(x) psi-hat_s(k) d^3k.
//!
//! The plane-wave part is the free SpectralEvaluator of psi-hat. Far from
//! the box zeta is the Nystrom sum zeta_k(x) = sum_x' G_k(x - x') w' A/(x') phi~_k(x');
//! on a radial Chebyshev grid rho_c the angular k-integral is folded into
//!
//!   T_c(x') = w' A/(x') sum_dirs w_Omega sum_s psi-hat_s(k) phi~_k^s(x'),   k = rho_c dir,
//!
//! with zeta_k(x') trilinear in k from a cartesian bank. Each detector
//! point then needs e^{-i rho_c R} sum_x' G_rho_c(x - x') T_c(x'), which is
//! smooth in rho and is interpolated onto the evaluator's radial nodes.
#pragma once

#include <memory>

#include "dfl/detector.hpp"
#include "dfl/eigen_bank.hpp"

namespace dfl {

struct PotentialStateOptions {
    int cheb_nodes = 96;
    int polar_order = 64;
    int n_phi = 32;
};

class PotentialState final : public ScatteringState {
  public:
    //! The bank must use a cartesian momentum grid and the amplitude a profile.
    PotentialState(std::shared_ptr<const MomentumAmplitude> amp, const Potential& pot,
                   std::shared_ptr<const EigenBank> bank, const PotentialStateOptions& opt = {});

    const MomentumAmplitude& outgoing() const override { return *amp_; }
    SpectralEvaluator evaluator(std::vector<Vec3> points, double t_max, const SpectralOptions& opt) const override;
    bool is_free() const override { return false; }

    //! Scattered part alone at time t, through the same radial series.
    std::vector<Spinor4> scattered(std::span<const Vec3> points, double t, const SpectralOptions& opt = {}) const;
    //! zeta_k^s on the bank grid by trilinear interpolation; zero outside the bank box.
    std::vector<Spinor4> interpolated_zeta(const Vec3& k, int s) const;
    const EigenBank& bank() const { return *bank_; }
    double setup_seconds() const { return setup_seconds_; }

  private:
    //! Adds the scattered coefficients to a free evaluator.
    void add_scattered(SpectralEvaluator& ev) const;
    //! Corner nodes and weights of the trilinear stencil at k; empty outside.
    int stencil(const Vec3& k, std::array<std::size_t, 8>& node, std::array<double, 8>& w) const;

    std::shared_ptr<const MomentumAmplitude> amp_;
    Potential pot_;
    std::shared_ptr<const EigenBank> bank_;
    PotentialStateOptions opt_;
    std::vector<double> rho_;
    //! Source nodes where A/ does not vanish.
    std::vector<Vec3> src_;
    //! T[c * src + j].
    std::vector<Spinor4> T_;
    double setup_seconds_ = 0.0;
};

//! Cartesian bank grid with n^3 nodes over the amplitude's own box.
MomentumGrid bank_grid_for(const MomentumAmplitude& amp, int n);

}  // namespace dfl
