// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Spherical detectors, time-integrated flux through cones and the
//! flux-across-surfaces sweep.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dfl/momentum.hpp"
#include "dfl/spectral.hpp"
#include "dfl/spinor.hpp"

namespace dfl {

//! A state whose wavefunction can be evaluated on a fixed set of points for
//! times in [0, t_max]. The free case and the potential case both reduce to
//! a radial series psi(x_p, t) = sum_i C_p(rho_i) e^{-i E_i t}.
class ScatteringState {
  public:
    virtual ~ScatteringState() = default;
    //! Amplitude whose momentum-side probability the flux should approach.
    virtual const MomentumAmplitude& outgoing() const = 0;
    virtual SpectralEvaluator evaluator(std::vector<Vec3> points, double t_max, const SpectralOptions& opt) const = 0;
    virtual bool is_free() const = 0;
};

class FreeState final : public ScatteringState {
  public:
    explicit FreeState(std::shared_ptr<const MomentumAmplitude> amp);
    const MomentumAmplitude& outgoing() const override { return *amp_; }
    SpectralEvaluator evaluator(std::vector<Vec3> points, double t_max, const SpectralOptions& opt) const override;
    bool is_free() const override { return true; }

  private:
    std::shared_ptr<const MomentumAmplitude> amp_;
};

struct SurfaceQuadrature {
    double R = 0.0;
    ConeSpec cone;
    std::vector<Vec3> points;
    std::vector<Vec3> normals;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
    double total_weight() const;
};

//! Gauss-Legendre in cos(theta) about the cone axis times a uniform azimuthal rule.
SurfaceQuadrature sphere_quadrature(double R, const ConeSpec& cone, int n_theta, int n_phi);

//---------------------------------------------------------------------------//
struct DetectorOptions {
    int cone_theta = 24;
    int sphere_theta = 32;
    int n_phi = 16;
    //! Lower momentum cut; zero selects max(|<k>| - 5 sigma_k, 0.2 m).
    double k_min = 0.0;
    //! Simpson intervals over [0, t_max]; zero selects max(400, 8 R m).
    int n_t = 0;
    //! Momentum-substituted panels: at most this k span and this t span.
    double k_panel = 0.1;
    double t_panel = 8.0;
    int k_order = 16;
    bool full_sphere = true;
    SpectralOptions spectral{};
};

double default_k_min(const MomentumAmplitude& amp);
double default_t_max(double R, double k_min, double m);
int default_n_t(double R, double m);

struct TimeIntegral {
    double value = 0.0;
    //! Part from t in [0, R].
    double spacelike = 0.0;
    double peak_flux = 0.0;
    double end_flux = 0.0;
    //! Flux at t_max exceeds 1e-6 of its peak.
    bool truncation_warning = false;
};

//! Simpson over [0, t_max] of sum_surface w j.n; `spacelike` is the
//! [0, R] part on Gauss-Legendre panels.
TimeIntegral crossing_direct(const ScatteringState& state, const SurfaceQuadrature& s, double t_max, int n_t,
                             const SpectralOptions& opt = {});
//! Same with |j| in place of j.n.
TimeIntegral abs_flux_integral(const ScatteringState& state, const SurfaceQuadrature& s, double t_max, int n_t,
                               const SpectralOptions& opt = {});
//! t in [0, R] and [R, R E(K)/K] by Gauss-Legendre panels in t, the rest through
//! t = (R/k) E_k for k in [k_min, K], K the top of the amplitude support.
TimeIntegral crossing_substituted(const ScatteringState& state, const SurfaceQuadrature& s, double k_min,
                                  const DetectorOptions& opt = {});

//! int_0^{k_min} <psi-hat, psi-hat> k^2 dk over the cone.
double tail_bound(const MomentumAmplitude& amp, const ConeSpec& cone, double k_min);

//---------------------------------------------------------------------------//
struct FASRow {
    double R = 0.0;
    double crossing_direct = 0.0;
    double crossing_substituted = 0.0;
    double abs_flux = 0.0;
    double spacelike_part = 0.0;
    double momentum_side = 0.0;
    double signed_disc = 0.0;
    double abs_disc = 0.0;
    double tail_bound = 0.0;
    // Metadata.
    double t_max = 0.0;
    int n_t = 0;
    double k_min = 0.0;
    std::size_t surface_points = 0;
    std::size_t radial_nodes = 0;
    bool truncation_warning = false;
    double full_crossing = 0.0;
    double full_abs = 0.0;
    double full_spacelike = 0.0;
    //! j0-weighted mean angle between j and n on the full sphere.
    double alignment = 0.0;
    //! Covariant parameterisation of the substituted integral.
    double covariant_lhs = 0.0;
    double seconds = 0.0;
};

struct FASReport {
    std::vector<FASRow> rows;
    ConeSpec cone;
    bool free = true;
    std::vector<std::string> warnings;
    //! abs_disc never increases along the sweep.
    bool abs_disc_non_increasing() const;
};

FASReport fas_sweep(const ScatteringState& state, const ConeSpec& cone, std::span<const double> R_list,
                    const DetectorOptions& opt = {});
void write_fas_csv(const FASReport& rep, const std::string& path);

//---------------------------------------------------------------------------//
struct CovariantRow {
    double lambda = 0.0;
    //! int dk dOmega j(lambda k, lambda E).n (m^2/E) k lambda^3 with lambda = R/k.
    double lhs = 0.0;
    double crossing = 0.0;
};

struct CovariantReport {
    std::vector<CovariantRow> rows;
    double momentum_side = 0.0;
    double covariant_momentum_side = 0.0;
    double rhs_diff = 0.0;
    double lhs_max_rel = 0.0;
};

CovariantReport covariant_check(const ScatteringState& state, const ConeSpec& cone, std::span<const double> lambda_list,
                                const DetectorOptions& opt = {});

}  // namespace dfl
