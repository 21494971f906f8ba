// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Momentum-space grids, outgoing-state amplitudes and momentum-side
//! probabilities.
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dfl/spinor.hpp"

namespace dfl {

enum class GridLayout { cartesian, spherical, cylindrical, unstructured };

const char* to_string(GridLayout layout);

struct SphericalSpec {
    Vec3 center{};
    Vec3 axis{0.0, 0.0, 1.0};
    double r_min = 0.0;
    double r_max = 1.0;
    int radial_panels = 1;
    int radial_order = 16;
    //! Gauss-Legendre order in u = cos(theta) per polar panel.
    int polar_order = 16;
    //! Optional panel break in u; places a cone boundary on a panel edge.
    std::optional<double> polar_split;
    int n_phi = 16;
};

struct CylindricalSpec {
    Vec3 center{};
    Vec3 axis{0.0, 0.0, 1.0};
    double z_min = -1.0;
    double z_max = 1.0;
    int axial_panels = 1;
    int axial_order = 16;
    double rho_max = 1.0;
    int radial_panels = 1;
    int radial_order = 16;
    int n_phi = 16;
};

//! Quadrature grid for d^3k integrals. Structured layouts store nodes with
//! axis 0 fastest: index = i0 + n0 * (i1 + n1 * i2).
struct MomentumGrid {
    GridLayout layout = GridLayout::unstructured;
    std::array<int, 3> shape{0, 1, 1};
    std::vector<Vec3> nodes;
    std::vector<double> weights;

    // Layout descriptor.
    Vec3 center{};
    Frame frame = Frame::aligned({0.0, 0.0, 1.0});
    double half_width = 0.0;  // cartesian
    double spacing = 0.0;     // cartesian
    double extent[2]{0.0, 0.0};  // spherical: r range; cylindrical: axial range
    double rho_max = 0.0;        // cylindrical
    bool periodic_last = false;

    static MomentumGrid cartesian(const Vec3& center, double half_width, int n);
    static MomentumGrid spherical(const SphericalSpec& spec);
    static MomentumGrid cylindrical(const CylindricalSpec& spec);
    static MomentumGrid from_nodes(std::vector<Vec3> nodes, std::vector<double> weights);

    std::size_t size() const { return nodes.size(); }
    bool structured() const { return layout != GridLayout::unstructured; }
    std::size_t index(int i0, int i1, int i2) const
    {
        return static_cast<std::size_t>(i0) + static_cast<std::size_t>(shape[0]) * (i1 + static_cast<std::size_t>(shape[1]) * i2);
    }

    //! Volume of the region the layout discretises.
    double enclosed_volume() const;
    //! Whether k lies in that region (boundary inclusive, 1e-12 slack).
    bool contains(const Vec3& k) const;
    //! Largest distance between adjacent nodes along any grid axis.
    double resolution() const;

    //! Visit every pair of adjacent nodes along the grid axes.
    void for_each_adjacent(const std::function<void(std::size_t, std::size_t)>& visit) const;
};

//---------------------------------------------------------------------------//
//! Continuation of a spin-channel amplitude off the grid nodes.
class AmplitudeProfile {
  public:
    virtual ~AmplitudeProfile() = default;
    virtual std::array<cplx, 2> channels(const Vec3& k) const = 0;
    //! Radial interval in |k| outside which the amplitude is negligible.
    virtual std::array<double, 2> radial_support() const = 0;
    //! Direction around which most of the amplitude sits.
    virtual Vec3 peak_direction() const = 0;
};

class GaussianProfile final : public AmplitudeProfile {
  public:
    GaussianProfile(const Vec3& k0, double sigma, std::array<cplx, 2> mix);

    std::array<cplx, 2> channels(const Vec3& k) const override;
    std::array<double, 2> radial_support() const override;
    Vec3 peak_direction() const override { return normalized(k0_); }

    //! |k - k0| beyond which the envelope is below 1e-13 of its peak.
    double cutoff_radius() const { return cutoff_; }

  private:
    Vec3 k0_;
    double sigma_;
    std::array<cplx, 2> mix_;
    double cutoff_;
};

//! Tricubic (Catmull-Rom) interpolation of cartesian grid data.
class GridInterpolatedProfile final : public AmplitudeProfile {
  public:
    GridInterpolatedProfile(const MomentumGrid& grid, std::vector<cplx> f1, std::vector<cplx> f2);

    std::array<cplx, 2> channels(const Vec3& k) const override;
    std::array<double, 2> radial_support() const override;
    Vec3 peak_direction() const override { return peak_; }

  private:
    MomentumGrid grid_;
    std::vector<cplx> f1_, f2_;
    Vec3 peak_;
};

//---------------------------------------------------------------------------//
struct MomentumAmplitude {
    MomentumGrid grid;
    std::vector<cplx> f1, f2;
    double m = 1.0;
    //! Optional off-grid continuation, scaled by profile_scale.
    std::shared_ptr<const AmplitudeProfile> profile;
    cplx profile_scale = 1.0;

    static MomentumAmplitude zero(const MomentumGrid& grid, double m);
    //! Sample a profile on the grid nodes; the profile is kept.
    static MomentumAmplitude from_profile(const MomentumGrid& grid, double m,
                                          std::shared_ptr<const AmplitudeProfile> profile);

    std::size_t size() const { return grid.size(); }
    bool has_profile() const { return static_cast<bool>(profile); }

    //! P = sum w (|f1|^2 + |f2|^2).
    double probability() const;
    //! Rescale to P = 1 (profile scale follows). Fails on a zero amplitude.
    void normalize();

    std::array<cplx, 2> channels_at(const Vec3& k) const;
    Spinor4 spinor_at(const Vec3& k) const;
    //! The same state sampled on another grid through the profile.
    MomentumAmplitude resampled(const MomentumGrid& target) const;
    //! Probability-weighted mean momentum over the nodes.
    Vec3 mean_momentum() const;
};

//! Normalised Gaussian packet f_s = mix_s N exp(-|k-k0|^2 / (4 sigma^2)).
MomentumAmplitude gaussian_packet(const MomentumGrid& grid, const Vec3& k0, double sigma, double m,
                                  std::array<cplx, 2> spin_mix);

//! The default grid for a packet: cartesian box of n^3 nodes about k0 with
//! half-width 6 sigma.
MomentumGrid default_packet_grid(const Vec3& k0, double sigma, int n = 48);

//! psi-hat at node `node`: f1 s1 + f2 s2.
Spinor4 synthesize(const MomentumAmplitude& amp, std::size_t node);

//---------------------------------------------------------------------------//
struct ConeSpec {
    Vec3 axis{1.0, 0.0, 0.0};
    double half_angle = pi;

    ConeSpec() = default;
    ConeSpec(const Vec3& axis_in, double half_angle_in);

    double solid_angle() const { return 2.0 * pi * (1.0 - std::cos(half_angle)); }
    bool full_sphere() const { return half_angle >= pi; }
    //! Direction test on k/|k|; k = 0 is excluded.
    bool contains(const Vec3& k) const;
    //! The cone about -axis covering the remaining directions.
    ConeSpec complement() const;
};

double momentum_side(const MomentumAmplitude& amp, const ConeSpec& cone);
double covariant_momentum_side(const MomentumAmplitude& amp, const ConeSpec& cone);

//! Spherical-product grid aligned with a cone with a polar panel break on
//! the cone edge, covering the amplitude's radial support.
MomentumGrid cone_aligned_grid(const MomentumAmplitude& amp, const ConeSpec& cone, int radial_nodes = 96,
                               int polar_order = 48, int n_phi = 96);

//! momentum_side evaluated on a cone-aligned resampling (needs a profile).
double momentum_side_resolved(const MomentumAmplitude& amp, const ConeSpec& cone);

//! Analytic mass of a normalised Gaussian packet below |k| = k_min,
//! by radial quadrature of the exact envelope.
double gaussian_mass_below(const Vec3& k0, double sigma, double k_min);

//---------------------------------------------------------------------------//
struct ClassGReport {
    //! max_nodes ||d^j f|| <k>^n for j = 0..2, n = 0..4.
    std::array<std::array<double, 5>, 3> max_value{};
    //! True where the maximum sits in the two outermost node layers.
    std::array<std::array<bool, 5>, 3> boundary_max{};
    bool flagged = false;
};

ClassGReport class_g_report(const MomentumAmplitude& amp);

//---------------------------------------------------------------------------//
void save_amplitude_csv(const MomentumAmplitude& amp, const std::string& path);
MomentumAmplitude load_amplitude_csv(const std::string& path, double m);
void save_amplitude_binary(const MomentumAmplitude& amp, const std::string& path);
MomentumAmplitude load_amplitude_binary(const std::string& path);

}  // namespace dfl
