// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Stationary phase for g(k) = sqrt(k^2+m^2) + a|k| - y.k and the
//! scattering-into-cones asymptotics built on it.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfl/momentum.hpp"
#include "dfl/spectral.hpp"

namespace dfl {

struct PhaseParams {
    double a = 0.0;
    Vec3 y{};
    double m = 1.0;
    double mu = 1.0;
};

void validate(const PhaseParams& p);
double phase_g(const PhaseParams& p, const Vec3& k);
Vec3 phase_gradient(const PhaseParams& p, const Vec3& k);

//! m (|y| - a) / sqrt(1 - (|y| - a)^2) along y-hat when |y| - a lies in [0, 1).
std::optional<Vec3> k_stationary(const PhaseParams& p);

using SpinorFunction = std::function<Spinor4(const Vec3&)>;

struct SpinorSamples {
    MomentumGrid grid;
    std::vector<Spinor4> values;
};

SpinorSamples sample(const MomentumGrid& grid, const SpinorFunction& chi);

//! Largest mu |g(k_a) - g(k_b)| over adjacent grid nodes.
double max_phase_step(const PhaseParams& p, const MomentumGrid& grid);

//! sum_nodes w e^{-i mu g} chi. Throws a resolution error unless every
//! adjacent-node phase step is below pi/2.
Spinor4 oscillatory_bruteforce(const PhaseParams& p, const SpinorSamples& chi);
//! Serial reversed-order compensated version of the same sum.
Spinor4 oscillatory_bruteforce_reference(const PhaseParams& p, const SpinorSamples& chi);

//! (-2 pi i)^{3/2} e^{-i mu g(k_stat)} E^{5/2} / m, principal branch.
cplx c1_constant(const PhaseParams& p, const Vec3& k_stat);
//! C1 mu^{-3/2} chi(k_stat); a = 0 only.
Spinor4 leading_term(const PhaseParams& p, const SpinorFunction& chi);

//! Spherical grid about `center` aligned with y that resolves the phase of
//! p on the ball of radius `radius` (oversampled by `oversample`). When
//! center lies on the y axis the phase is axisymmetric and two azimuthal
//! nodes suffice for amplitudes that share the symmetry.
MomentumGrid statphase_grid(const PhaseParams& p, const Vec3& center, double radius, double oversample = 1.0);

//! Smooth test amplitudes: a spinor times a radial envelope about `center`
//! cut off by the C^2 bump (1 - (r/radius)^2)^3.
struct ChiSpec {
    Vec3 center{};
    double radius = 1.2;
    //! Gaussian width; zero means a constant envelope.
    double sigma = 0.25;
    Spinor4 spinor{{cplx(1.0, 0.0), cplx(0.0, 0.5), cplx(0.25, 0.0), cplx(-0.5, 0.0)}};

    Spinor4 operator()(const Vec3& k) const;
};

struct StatPhaseRow {
    double mu = 0.0;
    double err_norm = 0.0;
    double leading_norm = 0.0;
    double brute_norm = 0.0;
};

struct StatPhaseResult {
    std::optional<Vec3> k_stat;
    Spinor4 leading;
    Spinor4 brute;
    double err = 0.0;
};

//! Brute force and (when a = 0 and k_stat exists) the leading term at one mu.
StatPhaseResult statphase_compare(const PhaseParams& p, const ChiSpec& chi, double oversample = 1.0);

struct ScalingReport {
    std::vector<StatPhaseRow> rows;
    //! Slope of err_norm (or brute_norm without a stationary point).
    double slope = 0.0;
    double leading_slope = 0.0;
    double brute_slope = 0.0;
    bool has_stationary_point = false;
};

ScalingReport error_scaling(const PhaseParams& base, std::span<const double> mu_list, const ChiSpec& chi);

void write_statphase_csv(const ScalingReport& rep, const std::string& path);

//---------------------------------------------------------------------------//
//! e^{-i lambda m^2} (i lambda)^{-3/2} psi-hat(k) sqrt(k^2/m^2 + 1).
Spinor4 cones_asymptotic(const MomentumAmplitude& amp, double lambda, const Vec3& k);
//! <psi-hat(k), psi-hat(k)> (k / m^2) sqrt(k^2 + m^2).
Vec3 flux_asymptotic(const MomentumAmplitude& amp, const Vec3& k);

struct ConesRow {
    double lambda = 0.0;
    double wave_norm = 0.0;
    double leading_norm = 0.0;
    double err_norm = 0.0;
    //! |lambda^3 j(lambda k) - flux_asymptotic| / |flux_asymptotic|.
    double flux_rel_err = 0.0;
};

struct ConesReport {
    Vec3 k{};
    std::vector<ConesRow> rows;
    double err_slope = 0.0;
    double leading_slope = 0.0;
};

//! psi(lambda k) = psi(x = lambda k, t = lambda E_k) from the spectral
//! evaluator against cones_asymptotic for each lambda.
ConesReport cones_scaling(const MomentumAmplitude& amp, const Vec3& k, std::span<const double> lambda_list,
                          const SpectralOptions& opt = {});
void write_cones_csv(const ConesReport& rep, const std::string& path);

}  // namespace dfl
