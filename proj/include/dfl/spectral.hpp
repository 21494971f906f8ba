// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Aliasing-free evaluation of psi(x,t) at arbitrary distance.
//!
//! For each point x = R n the momentum integral is taken in a frame aligned
//! with n. The azimuthal average B(rho, u) of psi-hat is expanded in Legendre
//! polynomials in u = cos(theta), so the u-integral is exact:
//!
//!   int e^{i rho R u} P_q(u) du = 2 i^q j_q(rho R).
//!
//! B is smooth in rho and is sampled on Chebyshev nodes; everything that
//! oscillates (j_q(rho R) and e^{-i E t}) lives on a fine composite
//! Gauss-Legendre radial rule whose panels follow the local frequency
//! R + t_max v(rho). The result is a per-point radial series
//!
//!   psi(x_p, t) = sum_i C_p(rho_i) e^{-i E_i t}.
#pragma once

#include <span>
#include <vector>

#include "dfl/momentum.hpp"
#include "dfl/quadrature.hpp"

namespace dfl {

struct SpectralOptions {
    int cheb_nodes = 48;
    int legendre_order = 40;
    int polar_nodes = 56;
    int n_phi = 48;
    int panel_order = 24;
    //! Phase (radians) a single radial panel may span.
    double panel_phase = 20.0;
    //! Allowance for the oscillation of the amplitude envelope itself.
    double envelope_frequency = 12.0;
    std::size_t point_chunk = 16;
};

class SpectralEvaluator {
  public:
    SpectralEvaluator(const MomentumAmplitude& amp, std::vector<Vec3> points, double t_max,
                      const SpectralOptions& opt = {});

    std::size_t points() const { return points_.size(); }
    const Vec3& point(std::size_t p) const { return points_[p]; }
    std::size_t radial_size() const { return rho_.size(); }
    const std::vector<double>& radial_nodes() const { return rho_; }
    const std::vector<double>& radial_weights() const { return w_; }
    const std::vector<double>& energies() const { return E_; }
    double t_max() const { return t_max_; }
    double mass() const { return m_; }

    //! Coefficient of e^{-i E_i t} for component c at point p.
    cplx& coefficient(std::size_t p, std::size_t i, int c) { return coef_[(4 * p + c) * rho_.size() + i]; }
    cplx coefficient(std::size_t p, std::size_t i, int c) const { return coef_[(4 * p + c) * rho_.size() + i]; }

    Spinor4 value(std::size_t p, double t) const;
    //! psi at every point for each time; result[j * points() + p].
    std::vector<Spinor4> values(std::span<const double> times) const;
    //! Same, through the serial reference kernel (plain loops, no blocking).
    std::vector<Spinor4> values_reference(std::span<const double> times) const;

    //! Rounding-level accuracy bound on |psi| at point p.
    double rounding_floor(std::size_t p) const { return floor_[p]; }
    void add_rounding_floor(std::size_t p, double v) { floor_[p] += v; }

  private:
    std::vector<Vec3> points_;
    double t_max_;
    double m_;
    std::vector<double> rho_, w_, E_;
    std::vector<cplx> coef_;
    std::vector<double> floor_;
};

//! Composite Gauss-Legendre rule on [a, b] whose panel lengths keep
//! (R + t_max v(rho) + env) * length below `panel_phase`.
Rule adaptive_radial_rule(double a, double b, double m, double R, double t_max, const SpectralOptions& opt);

//---------------------------------------------------------------------------//
struct SpacelikeReport {
    std::vector<double> x;
    //! x^2 ||psi(x e, eta x)||_s.
    std::vector<double> scaled;
    //! Rounding-level allowance at each x (already multiplied by x^2).
    std::vector<double> floor;
    double sup = 0.0;
    //! Every value at or below the first one (within the allowance).
    bool bounded = true;
};

SpacelikeReport spacelike_decay_check(const MomentumAmplitude& amp, double eta, std::span<const double> x_list,
                                      const Vec3& direction, const SpectralOptions& opt = {});

}  // namespace dfl
