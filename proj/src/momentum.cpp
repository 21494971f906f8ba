// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/momentum.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dfl/parallel.hpp"
#include "dfl/quadrature.hpp"

namespace dfl {

const char* to_string(GridLayout layout)
{
    switch (layout) {
        case GridLayout::cartesian: return "cartesian";
        case GridLayout::spherical: return "spherical";
        case GridLayout::cylindrical: return "cylindrical";
        case GridLayout::unstructured: return "unstructured";
    }
    return "unknown";
}

//---------------------------------------------------------------------------//
// MomentumGrid
//---------------------------------------------------------------------------//

MomentumGrid MomentumGrid::cartesian(const Vec3& center, double half_width, int n)
{
    if (n < 2 || !(half_width > 0.0))
        throw Error(ErrorKind::invalid_argument, "cartesian grid needs n >= 2 and half_width > 0");
    MomentumGrid g;
    g.layout = GridLayout::cartesian;
    g.shape = {n, n, n};
    g.center = center;
    g.half_width = half_width;
    g.spacing = 2.0 * half_width / (n - 1);
    const Rule r = trapezoid(-half_width, half_width, n);
    g.nodes.reserve(static_cast<std::size_t>(n) * n * n);
    g.weights.reserve(g.nodes.capacity());
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                g.nodes.push_back(center + Vec3{r.x[i], r.x[j], r.x[k]});
                g.weights.push_back(r.w[i] * r.w[j] * r.w[k]);
            }
    return g;
}

MomentumGrid MomentumGrid::spherical(const SphericalSpec& s)
{
    if (!(s.r_max > s.r_min) || s.r_min < 0.0 || s.n_phi < 1)
        throw Error(ErrorKind::invalid_argument, "spherical grid needs 0 <= r_min < r_max and n_phi >= 1");
    MomentumGrid g;
    g.layout = GridLayout::spherical;
    g.center = s.center;
    g.frame = Frame::aligned(s.axis);
    g.extent[0] = s.r_min;
    g.extent[1] = s.r_max;
    g.periodic_last = true;

    const Rule rr = composite_gauss_legendre(s.r_min, s.r_max, s.radial_panels, s.radial_order);
    Rule ru;
    if (s.polar_split && *s.polar_split > -1.0 && *s.polar_split < 1.0) {
        ru = gauss_legendre(s.polar_order, -1.0, *s.polar_split);
        const Rule hi = gauss_legendre(s.polar_order, *s.polar_split, 1.0);
        ru.x.insert(ru.x.end(), hi.x.begin(), hi.x.end());
        ru.w.insert(ru.w.end(), hi.w.begin(), hi.w.end());
    } else {
        ru = gauss_legendre(s.polar_order, -1.0, 1.0);
    }
    const int nr = static_cast<int>(rr.size()), nu = static_cast<int>(ru.size());
    g.shape = {nr, nu, s.n_phi};
    const double wphi = 2.0 * pi / s.n_phi;
    g.nodes.reserve(static_cast<std::size_t>(nr) * nu * s.n_phi);
    g.weights.reserve(g.nodes.capacity());
    for (int l = 0; l < s.n_phi; ++l) {
        const double phi = wphi * l;
        const double c = std::cos(phi), sn = std::sin(phi);
        for (int j = 0; j < nu; ++j) {
            const double u = ru.x[j];
            const double st = std::sqrt(std::max(0.0, 1.0 - u * u));
            const Vec3 dir = g.frame.to_global(st * c, st * sn, u);
            for (int i = 0; i < nr; ++i) {
                const double r = rr.x[i];
                g.nodes.push_back(s.center + r * dir);
                g.weights.push_back(rr.w[i] * r * r * ru.w[j] * wphi);
            }
        }
    }
    return g;
}

MomentumGrid MomentumGrid::cylindrical(const CylindricalSpec& s)
{
    if (!(s.z_max > s.z_min) || !(s.rho_max > 0.0) || s.n_phi < 1)
        throw Error(ErrorKind::invalid_argument, "cylindrical grid needs z_min < z_max, rho_max > 0");
    MomentumGrid g;
    g.layout = GridLayout::cylindrical;
    g.center = s.center;
    g.frame = Frame::aligned(s.axis);
    g.extent[0] = s.z_min;
    g.extent[1] = s.z_max;
    g.rho_max = s.rho_max;
    g.periodic_last = true;

    const Rule rz = composite_gauss_legendre(s.z_min, s.z_max, s.axial_panels, s.axial_order);
    const Rule rp = composite_gauss_legendre(0.0, s.rho_max, s.radial_panels, s.radial_order);
    const int nz = static_cast<int>(rz.size()), np = static_cast<int>(rp.size());
    g.shape = {nz, np, s.n_phi};
    const double wphi = 2.0 * pi / s.n_phi;
    for (int l = 0; l < s.n_phi; ++l) {
        const double phi = wphi * l;
        const double c = std::cos(phi), sn = std::sin(phi);
        for (int j = 0; j < np; ++j)
            for (int i = 0; i < nz; ++i) {
                g.nodes.push_back(s.center + g.frame.to_global(rp.x[j] * c, rp.x[j] * sn, rz.x[i]));
                g.weights.push_back(rz.w[i] * rp.w[j] * rp.x[j] * wphi);
            }
    }
    return g;
}

MomentumGrid MomentumGrid::from_nodes(std::vector<Vec3> nodes, std::vector<double> weights)
{
    if (nodes.size() != weights.size())
        throw Error(ErrorKind::invalid_argument, "node and weight counts differ");
    for (double w : weights)
        if (!(w > 0.0)) throw Error(ErrorKind::invalid_argument, "grid weights must be positive");
    MomentumGrid g;
    g.layout = GridLayout::unstructured;
    g.shape = {static_cast<int>(nodes.size()), 1, 1};
    g.nodes = std::move(nodes);
    g.weights = std::move(weights);
    return g;
}

double MomentumGrid::enclosed_volume() const
{
    switch (layout) {
        case GridLayout::cartesian: return std::pow(2.0 * half_width, 3);
        case GridLayout::spherical:
            return 4.0 * pi / 3.0 * (std::pow(extent[1], 3) - std::pow(extent[0], 3));
        case GridLayout::cylindrical: return pi * rho_max * rho_max * (extent[1] - extent[0]);
        case GridLayout::unstructured: break;
    }
    CompensatedSum<double> s;
    for (double w : weights) s.add(w);
    return s.value();
}

bool MomentumGrid::contains(const Vec3& k) const
{
    const Vec3 d = k - center;
    switch (layout) {
        case GridLayout::cartesian: {
            const double lim = half_width * (1.0 + 1e-12);
            return std::abs(d.x) <= lim && std::abs(d.y) <= lim && std::abs(d.z) <= lim;
        }
        case GridLayout::spherical: {
            const double r = norm(d);
            return r >= extent[0] * (1.0 - 1e-12) && r <= extent[1] * (1.0 + 1e-12);
        }
        case GridLayout::cylindrical: {
            const double z = dot(d, frame.e3);
            const double rho = norm(d - z * frame.e3);
            const double span = extent[1] - extent[0];
            return z >= extent[0] - 1e-12 * span && z <= extent[1] + 1e-12 * span
                   && rho <= rho_max * (1.0 + 1e-12);
        }
        case GridLayout::unstructured: break;
    }
    return true;
}

void MomentumGrid::for_each_adjacent(const std::function<void(std::size_t, std::size_t)>& visit) const
{
    if (!structured()) return;
    const int n0 = shape[0], n1 = shape[1], n2 = shape[2];
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i0 = 0; i0 < n0; ++i0) {
                const std::size_t a = index(i0, i1, i2);
                if (i0 + 1 < n0) visit(a, index(i0 + 1, i1, i2));
                if (i1 + 1 < n1) visit(a, index(i0, i1 + 1, i2));
                if (i2 + 1 < n2)
                    visit(a, index(i0, i1, i2 + 1));
                else if (periodic_last && n2 > 1)
                    visit(a, index(i0, i1, 0));
            }
}

double MomentumGrid::resolution() const
{
    if (layout == GridLayout::cartesian) return spacing;
    double h = 0.0;
    for_each_adjacent([&](std::size_t a, std::size_t b) { h = std::max(h, norm(nodes[a] - nodes[b])); });
    return h;
}

//---------------------------------------------------------------------------//
// Profiles
//---------------------------------------------------------------------------//

GaussianProfile::GaussianProfile(const Vec3& k0, double sigma, std::array<cplx, 2> mix)
    : k0_(k0), sigma_(sigma), mix_(mix), cutoff_(2.0 * sigma * std::sqrt(13.0 * std::log(10.0)))
{
}

std::array<cplx, 2> GaussianProfile::channels(const Vec3& k) const
{
    const Vec3 d = k - k0_;
    const double e = std::exp(-dot(d, d) / (4.0 * sigma_ * sigma_));
    return {mix_[0] * e, mix_[1] * e};
}

std::array<double, 2> GaussianProfile::radial_support() const
{
    const double k = norm(k0_);
    return {std::max(0.0, k - cutoff_), k + cutoff_};
}

namespace {

// Catmull-Rom weights for fractional offset s in [0, 1).
std::array<double, 4> catmull_rom(double s)
{
    const double s2 = s * s, s3 = s2 * s;
    return {0.5 * (-s3 + 2.0 * s2 - s), 0.5 * (3.0 * s3 - 5.0 * s2 + 2.0), 0.5 * (-3.0 * s3 + 4.0 * s2 + s),
            0.5 * (s3 - s2)};
}

}  // namespace

GridInterpolatedProfile::GridInterpolatedProfile(const MomentumGrid& grid, std::vector<cplx> f1,
                                                 std::vector<cplx> f2)
    : grid_(grid), f1_(std::move(f1)), f2_(std::move(f2))
{
    if (grid_.layout != GridLayout::cartesian)
        throw Error(ErrorKind::layout_unsupported, "interpolated profiles need a cartesian grid");
    double best = -1.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const double v = std::norm(f1_[i]) + std::norm(f2_[i]);
        if (v > best) {
            best = v;
            peak_ = normalized(grid_.nodes[i]);
        }
    }
}

std::array<cplx, 2> GridInterpolatedProfile::channels(const Vec3& k) const
{
    if (!grid_.contains(k)) return {0.0, 0.0};
    const int n = grid_.shape[0];
    std::array<int, 3> base{};
    std::array<std::array<double, 4>, 3> w{};
    for (int a = 0; a < 3; ++a) {
        const double t = (k[a] - grid_.center[a] + grid_.half_width) / grid_.spacing;
        const int i = std::clamp(static_cast<int>(std::floor(t)), 0, n - 2);
        base[a] = i;
        w[a] = catmull_rom(std::clamp(t - i, 0.0, 1.0));
    }
    cplx a1 = 0.0, a2 = 0.0;
    for (int dz = 0; dz < 4; ++dz) {
        const int iz = base[2] + dz - 1;
        if (iz < 0 || iz >= n) continue;
        for (int dy = 0; dy < 4; ++dy) {
            const int iy = base[1] + dy - 1;
            if (iy < 0 || iy >= n) continue;
            const double wzy = w[2][dz] * w[1][dy];
            for (int dx = 0; dx < 4; ++dx) {
                const int ix = base[0] + dx - 1;
                if (ix < 0 || ix >= n) continue;
                const std::size_t id = grid_.index(ix, iy, iz);
                const double ww = wzy * w[0][dx];
                a1 += ww * f1_[id];
                a2 += ww * f2_[id];
            }
        }
    }
    return {a1, a2};
}

std::array<double, 2> GridInterpolatedProfile::radial_support() const
{
    double lo2 = 0.0, hi2 = 0.0;
    for (int a = 0; a < 3; ++a) {
        const double l = grid_.center[a] - grid_.half_width, h = grid_.center[a] + grid_.half_width;
        const double far = std::max(std::abs(l), std::abs(h));
        hi2 += far * far;
        if (l > 0.0) lo2 += l * l;
        if (h < 0.0) lo2 += h * h;
    }
    return {std::sqrt(lo2), std::sqrt(hi2)};
}

//---------------------------------------------------------------------------//
// MomentumAmplitude
//---------------------------------------------------------------------------//

MomentumAmplitude MomentumAmplitude::zero(const MomentumGrid& grid, double m)
{
    MomentumAmplitude a;
    a.grid = grid;
    a.m = m;
    a.f1.assign(grid.size(), 0.0);
    a.f2.assign(grid.size(), 0.0);
    return a;
}

MomentumAmplitude MomentumAmplitude::from_profile(const MomentumGrid& grid, double m,
                                                  std::shared_ptr<const AmplitudeProfile> profile)
{
    MomentumAmplitude a = zero(grid, m);
    a.profile = std::move(profile);
    parallel_for(grid.size(), [&](std::size_t i) {
        const auto c = a.profile->channels(grid.nodes[i]);
        a.f1[i] = c[0];
        a.f2[i] = c[1];
    });
    return a;
}

double MomentumAmplitude::probability() const
{
    return blocked_sum<double>(size(), [&](std::size_t i) {
        return grid.weights[i] * (std::norm(f1[i]) + std::norm(f2[i]));
    });
}

void MomentumAmplitude::normalize()
{
    const double p = probability();
    if (!(p > 0.0) || !std::isfinite(p))
        throw Error(ErrorKind::invalid_argument, "cannot normalise an amplitude with zero probability");
    const double c = 1.0 / std::sqrt(p);
    for (auto& v : f1) v *= c;
    for (auto& v : f2) v *= c;
    profile_scale *= c;
}

std::array<cplx, 2> MomentumAmplitude::channels_at(const Vec3& k) const
{
    if (!profile) throw Error(ErrorKind::profile_required, "amplitude has no off-grid profile");
    auto c = profile->channels(k);
    return {profile_scale * c[0], profile_scale * c[1]};
}

Spinor4 MomentumAmplitude::spinor_at(const Vec3& k) const
{
    const auto c = channels_at(k);
    return combine_spinors(k, m, c[0], c[1]);
}

MomentumAmplitude MomentumAmplitude::resampled(const MomentumGrid& target) const
{
    if (!profile) throw Error(ErrorKind::profile_required, "resampling needs an off-grid profile");
    MomentumAmplitude a = zero(target, m);
    a.profile = profile;
    a.profile_scale = profile_scale;
    parallel_for(target.size(), [&](std::size_t i) {
        const auto c = channels_at(target.nodes[i]);
        a.f1[i] = c[0];
        a.f2[i] = c[1];
    });
    return a;
}

Vec3 MomentumAmplitude::mean_momentum() const
{
    const double p = probability();
    Vec3 s = blocked_sum<Vec3>(size(), [&](std::size_t i) {
        return (grid.weights[i] * (std::norm(f1[i]) + std::norm(f2[i]))) * grid.nodes[i];
    });
    return p > 0.0 ? (1.0 / p) * s : Vec3{};
}

MomentumGrid default_packet_grid(const Vec3& k0, double sigma, int n)
{
    return MomentumGrid::cartesian(k0, 6.0 * sigma, n);
}

MomentumAmplitude gaussian_packet(const MomentumGrid& grid, const Vec3& k0, double sigma, double m,
                                  std::array<cplx, 2> spin_mix)
{
    if (!(sigma > 0.0)) throw Error(ErrorKind::invalid_argument, "gaussian_packet needs sigma > 0");
    if (!(m > 0.0)) throw Error(ErrorKind::invalid_argument, "gaussian_packet needs m > 0");
    if (spin_mix[0] == 0.0 && spin_mix[1] == 0.0)
        throw Error(ErrorKind::invalid_argument, "spin_mix must not vanish");
    const double r = 6.0 * sigma;
    if (grid.layout == GridLayout::cartesian) {
        for (int c = 0; c < 8; ++c) {
            const Vec3 corner = k0 + Vec3{(c & 1) ? r : -r, (c & 2) ? r : -r, (c & 4) ? r : -r};
            if (!grid.contains(corner))
                throw Error(ErrorKind::grid_too_small, "grid box does not cover k0 +- 6 sigma");
        }
    } else {
        for (int a = 0; a < 3; ++a)
            for (double sgn : {-1.0, 1.0}) {
                Vec3 p = k0;
                p[a] += sgn * r;
                if (!grid.contains(p))
                    throw Error(ErrorKind::grid_too_small, "grid does not cover k0 +- 6 sigma");
            }
    }
    auto prof = std::make_shared<GaussianProfile>(k0, sigma, spin_mix);
    MomentumAmplitude a = MomentumAmplitude::from_profile(grid, m, prof);
    a.normalize();
    return a;
}

Spinor4 synthesize(const MomentumAmplitude& amp, std::size_t node)
{
    if (node >= amp.size()) throw Error(ErrorKind::invalid_argument, "node index out of range");
    return combine_spinors(amp.grid.nodes[node], amp.m, amp.f1[node], amp.f2[node]);
}

//---------------------------------------------------------------------------//
// Cones
//---------------------------------------------------------------------------//

ConeSpec::ConeSpec(const Vec3& axis_in, double half_angle_in)
{
    const double n = norm(axis_in);
    if (!(n > 0.0)) throw Error(ErrorKind::validation_error, "cone axis must be non-zero");
    if (!(half_angle_in > 0.0) || half_angle_in > pi)
        throw Error(ErrorKind::validation_error, "cone half_angle must lie in (0, pi]");
    axis = (1.0 / n) * axis_in;
    half_angle = half_angle_in;
}

bool ConeSpec::contains(const Vec3& k) const
{
    const double kn = norm(k);
    if (kn == 0.0) return false;
    if (full_sphere()) return true;
    return dot(k, axis) >= std::cos(half_angle) * kn;
}

ConeSpec ConeSpec::complement() const
{
    ConeSpec c;
    c.axis = -axis;
    c.half_angle = pi - half_angle;
    return c;
}

double momentum_side(const MomentumAmplitude& amp, const ConeSpec& cone)
{
    return blocked_sum<double>(amp.size(), [&](std::size_t i) {
        if (!cone.contains(amp.grid.nodes[i])) return 0.0;
        return amp.grid.weights[i] * norm_s2(synthesize(amp, i));
    });
}

double covariant_momentum_side(const MomentumAmplitude& amp, const ConeSpec& cone)
{
    return blocked_sum<double>(amp.size(), [&](std::size_t i) {
        const Vec3& k = amp.grid.nodes[i];
        if (!cone.contains(k)) return 0.0;
        const double e = energy(k, amp.m);
        Spinor4 li = synthesize(amp, i);
        li *= std::sqrt(std::sqrt(dot(k, k) + amp.m * amp.m));
        // d sigma = d^3k / E on the mass hyperboloid.
        return (amp.grid.weights[i] / e) * norm_s2(li);
    });
}

MomentumGrid cone_aligned_grid(const MomentumAmplitude& amp, const ConeSpec& cone, int radial_nodes,
                               int polar_order, int n_phi)
{
    if (!amp.profile) throw Error(ErrorKind::profile_required, "cone-aligned grid needs a profile");
    const auto support = amp.profile->radial_support();
    SphericalSpec s;
    s.axis = cone.axis;
    s.r_min = support[0];
    s.r_max = support[1];
    s.radial_order = 16;
    s.radial_panels = std::max(1, radial_nodes / 16);
    s.polar_order = polar_order;
    if (!cone.full_sphere()) s.polar_split = std::cos(cone.half_angle);
    s.n_phi = n_phi;
    return MomentumGrid::spherical(s);
}

double momentum_side_resolved(const MomentumAmplitude& amp, const ConeSpec& cone)
{
    const MomentumAmplitude fine = amp.resampled(cone_aligned_grid(amp, cone));
    // Nodes on the split sit strictly on one side, so the filter is exact.
    return momentum_side(fine, cone);
}

double gaussian_mass_below(const Vec3& k0, double sigma, double k_min)
{
    if (!(k_min > 0.0)) return 0.0;
    const double s2 = sigma * sigma;
    const double kk = norm(k0);
    const double norm2 = std::pow(2.0 * pi * s2, -1.5);
    const Rule r = composite_gauss_legendre(0.0, k_min, 8, 32);
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double rho = r.x[i];
        double ang;
        if (kk * rho < 1e-8)
            ang = 4.0 * pi * std::exp(-(rho * rho + kk * kk) / (2.0 * s2));
        else
            ang = 2.0 * pi * s2 / (rho * kk)
                  * (std::exp(-(rho - kk) * (rho - kk) / (2.0 * s2)) - std::exp(-(rho + kk) * (rho + kk) / (2.0 * s2)));
        acc.add(r.w[i] * rho * rho * ang);
    }
    return norm2 * acc.value();
}

//---------------------------------------------------------------------------//
// Class diagnostics
//---------------------------------------------------------------------------//

ClassGReport class_g_report(const MomentumAmplitude& amp)
{
    const MomentumGrid& g = amp.grid;
    if (g.layout != GridLayout::cartesian)
        throw Error(ErrorKind::layout_unsupported, "class_g_report needs a cartesian grid");
    const int n = g.shape[0];
    const double h = g.spacing;
    ClassGReport rep;
    std::array<std::array<double, 5>, 3> inner{}, outer{};

    auto at = [&](const std::vector<cplx>& f, int i, int j, int k) { return f[g.index(i, j, k)]; };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const std::array<int, 3> id{i, j, k};
                const bool edge = i <= 1 || j <= 1 || k <= 1 || i >= n - 2 || j >= n - 2 || k >= n - 2;
                const bool interior = i >= 1 && j >= 1 && k >= 1 && i <= n - 2 && j <= n - 2 && k <= n - 2;
                const Vec3& kv = g.nodes[g.index(i, j, k)];
                const double bracket = std::sqrt(1.0 + dot(kv, kv));
                double d0 = 0.0, d1 = 0.0, d2 = 0.0;
                for (const auto* f : {&amp.f1, &amp.f2}) {
                    d0 += std::norm(at(*f, i, j, k));
                    if (!interior) continue;
                    const cplx c = at(*f, i, j, k);
                    for (int a = 0; a < 3; ++a) {
                        std::array<int, 3> p = id, q = id;
                        ++p[a];
                        --q[a];
                        const cplx fp = at(*f, p[0], p[1], p[2]), fm = at(*f, q[0], q[1], q[2]);
                        d1 += std::norm((fp - fm) / (2.0 * h));
                        d2 += std::norm((fp - 2.0 * c + fm) / (h * h));
                        for (int b = a + 1; b < 3; ++b) {
                            cplx mixed = 0.0;
                            for (int sa : {1, -1})
                                for (int sb : {1, -1}) {
                                    std::array<int, 3> r = id;
                                    r[a] += sa;
                                    r[b] += sb;
                                    mixed += static_cast<double>(sa * sb) * at(*f, r[0], r[1], r[2]);
                                }
                            d2 += 2.0 * std::norm(mixed / (4.0 * h * h));
                        }
                    }
                }
                const std::array<double, 3> d{std::sqrt(d0), std::sqrt(d1), std::sqrt(d2)};
                double pw = 1.0;
                for (int nn = 0; nn < 5; ++nn) {
                    for (int jj = 0; jj < 3; ++jj) {
                        if (jj > 0 && !interior) continue;
                        const double v = d[jj] * pw;
                        auto& slot = edge ? outer[jj][nn] : inner[jj][nn];
                        slot = std::max(slot, v);
                    }
                    pw *= bracket;
                }
            }
    for (int jj = 0; jj < 3; ++jj)
        for (int nn = 0; nn < 5; ++nn) {
            rep.max_value[jj][nn] = std::max(inner[jj][nn], outer[jj][nn]);
            rep.boundary_max[jj][nn] = outer[jj][nn] > 0.0 && outer[jj][nn] >= inner[jj][nn];
            rep.flagged = rep.flagged || rep.boundary_max[jj][nn];
        }
    return rep;
}

//---------------------------------------------------------------------------//
// Persistence
//---------------------------------------------------------------------------//

namespace {

constexpr char amp_magic[8] = {'D', 'F', 'L', 'A', 'M', 'P', '\0', '\1'};

template<class T>
void put(std::ostream& os, T v)
{
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template<class T>
T get(std::istream& is)
{
    unsigned char b[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(b), sizeof(T)))
        throw Error(ErrorKind::io_error, "truncated binary file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

void attach_profile(MomentumAmplitude& a)
{
    if (a.grid.layout == GridLayout::cartesian)
        a.profile = std::make_shared<GridInterpolatedProfile>(a.grid, a.f1, a.f2);
}

// Recognise a cartesian lattice stored in this library's node order.
void detect_cartesian(MomentumGrid& g)
{
    const std::size_t count = g.size();
    const int n = static_cast<int>(std::lround(std::cbrt(static_cast<double>(count))));
    if (n < 2 || static_cast<std::size_t>(n) * n * n != count) return;
    const Vec3 lo = g.nodes.front(), hi = g.nodes.back();
    const double hw = 0.5 * (hi.x - lo.x);
    if (!(hw > 0.0)) return;
    const Vec3 c = 0.5 * (lo + hi);
    MomentumGrid ref = MomentumGrid::cartesian(c, hw, n);
    for (std::size_t i = 0; i < count; ++i) {
        if (norm(ref.nodes[i] - g.nodes[i]) > 1e-9 * (1.0 + hw)) return;
        if (std::abs(ref.weights[i] - g.weights[i]) > 1e-9 * ref.weights[i]) return;
    }
    g = std::move(ref);
}

}  // namespace

void save_amplitude_csv(const MomentumAmplitude& amp, const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error(ErrorKind::io_error, "cannot write " + path);
    std::fprintf(f, "k1,k2,k3,w,re_f1,im_f1,re_f2,im_f2\n");
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const Vec3& k = amp.grid.nodes[i];
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k.x, k.y, k.z, amp.grid.weights[i],
                     amp.f1[i].real(), amp.f1[i].imag(), amp.f2[i].real(), amp.f2[i].imag());
    }
    if (std::fclose(f) != 0) throw Error(ErrorKind::io_error, "cannot write " + path);
}

MomentumAmplitude load_amplitude_csv(const std::string& path, double m)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("k1,k2,k3,w,re_f1,im_f1,re_f2,im_f2", 0) != 0)
        throw Error(ErrorKind::io_error, path + ": missing amplitude header");
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::vector<cplx> f1, f2;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double v[8];
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int c = 0; c < 8; ++c) {
            auto [ptr, ec] = std::from_chars(p, end, v[c]);
            if (ec != std::errc{} || (c < 7 && (ptr == end || *ptr != ',')))
                throw Error(ErrorKind::io_error, path + ":" + std::to_string(lineno) + ": malformed row");
            p = ptr + 1;
        }
        nodes.push_back({v[0], v[1], v[2]});
        weights.push_back(v[3]);
        f1.emplace_back(v[4], v[5]);
        f2.emplace_back(v[6], v[7]);
    }
    MomentumAmplitude a;
    a.grid = MomentumGrid::from_nodes(std::move(nodes), std::move(weights));
    detect_cartesian(a.grid);
    a.f1 = std::move(f1);
    a.f2 = std::move(f2);
    a.m = m;
    attach_profile(a);
    return a;
}

void save_amplitude_binary(const MomentumAmplitude& amp, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::io_error, "cannot write " + path);
    const MomentumGrid& g = amp.grid;
    os.write(amp_magic, 8);
    put<std::uint32_t>(os, 1);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.layout));
    for (int s : g.shape) put<std::int32_t>(os, s);
    put<std::uint32_t>(os, g.periodic_last ? 1u : 0u);
    put<double>(os, amp.m);
    for (const Vec3* v : {&g.center, &g.frame.e1, &g.frame.e2, &g.frame.e3})
        for (int a = 0; a < 3; ++a) put<double>(os, (*v)[a]);
    put<double>(os, g.half_width);
    put<double>(os, g.spacing);
    put<double>(os, g.extent[0]);
    put<double>(os, g.extent[1]);
    put<double>(os, g.rho_max);
    put<std::uint64_t>(os, g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (int a = 0; a < 3; ++a) put<double>(os, g.nodes[i][a]);
        put<double>(os, g.weights[i]);
        put<double>(os, amp.f1[i].real());
        put<double>(os, amp.f1[i].imag());
        put<double>(os, amp.f2[i].real());
        put<double>(os, amp.f2[i].imag());
    }
    if (!os) throw Error(ErrorKind::io_error, "cannot write " + path);
}

MomentumAmplitude load_amplitude_binary(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::io_error, "cannot read " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, amp_magic, 8) != 0)
        throw Error(ErrorKind::io_error, path + ": not an amplitude file");
    if (get<std::uint32_t>(is) != 1) throw Error(ErrorKind::io_error, path + ": unsupported version");
    MomentumAmplitude a;
    MomentumGrid& g = a.grid;
    const auto layout = get<std::uint32_t>(is);
    if (layout > 3) throw Error(ErrorKind::io_error, path + ": bad layout tag");
    g.layout = static_cast<GridLayout>(layout);
    for (int& s : g.shape) s = get<std::int32_t>(is);
    g.periodic_last = get<std::uint32_t>(is) != 0;
    a.m = get<double>(is);
    for (Vec3* v : {&g.center, &g.frame.e1, &g.frame.e2, &g.frame.e3})
        for (int c = 0; c < 3; ++c) (*v)[c] = get<double>(is);
    g.half_width = get<double>(is);
    g.spacing = get<double>(is);
    g.extent[0] = get<double>(is);
    g.extent[1] = get<double>(is);
    g.rho_max = get<double>(is);
    const auto count = get<std::uint64_t>(is);
    g.nodes.resize(count);
    g.weights.resize(count);
    a.f1.resize(count);
    a.f2.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        for (int c = 0; c < 3; ++c) g.nodes[i][c] = get<double>(is);
        g.weights[i] = get<double>(is);
        const double r1 = get<double>(is), i1 = get<double>(is), r2 = get<double>(is), i2 = get<double>(is);
        a.f1[i] = {r1, i1};
        a.f2[i] = {r2, i2};
    }
    attach_profile(a);
    return a;
}

}  // namespace dfl
