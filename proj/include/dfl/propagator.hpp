// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Free evolution psi(x,t) = (2 pi)^{-3/2} sum_k w e^{i(k.x - E t)} psi-hat(k)
//! by direct summation over the momentum nodes.
#pragma once

#include <span>
#include <vector>

#include "dfl/momentum.hpp"

namespace dfl {

struct SpacetimePoint {
    Vec3 x;
    double t = 0.0;
};

//! Caches w (2 pi)^{-3/2} psi-hat(k) and E_k per node.
class WaveEvaluator {
  public:
    explicit WaveEvaluator(const MomentumAmplitude& amp);

    //! Parallel blocked sum; throws an aliasing error when |x| h > pi.
    Spinor4 operator()(const SpacetimePoint& p) const;
    //! Many points at once, parallel over points; bitwise equal to operator().
    std::vector<Spinor4> batch(std::span<const SpacetimePoint> pts) const;
    //! Independent serial oracle: reversed node order, Neumaier compensated.
    Spinor4 serial_reference(const SpacetimePoint& p) const;

    //! Largest |x| accepted by the aliasing guard (infinite when unguarded).
    double aliasing_radius() const;
    std::size_t size() const { return E_.size(); }

  private:
    void guard(const SpacetimePoint& p) const;
    Spinor4 block_sum(const SpacetimePoint& p, std::size_t lo, std::size_t hi) const;

    std::vector<double> kx_, ky_, kz_, E_;
    std::vector<Spinor4> c_;
    double resolution_ = 0.0;
};

Spinor4 evaluate_wave(const MomentumAmplitude& amp, const SpacetimePoint& p);
FluxVector flux_at(const MomentumAmplitude& amp, const SpacetimePoint& p);

struct ContinuityResidual {
    //! |d_t j0 + div j|, the conservation law of the Dirac equation.
    double plus = 0.0;
    //! |d_t j0 - div j|, the same balance with the opposite relative sign.
    double minus = 0.0;
};

//! Central differences of step h in t and in each coordinate.
ContinuityResidual continuity_residual(const WaveEvaluator& wave, const SpacetimePoint& p, double h = 1e-3);
ContinuityResidual continuity_residual(const MomentumAmplitude& amp, const SpacetimePoint& p, double h = 1e-3);

}  // namespace dfl
