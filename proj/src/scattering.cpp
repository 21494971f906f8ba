// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/scattering.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <limits>

#include "dfl/green.hpp"
#include "dfl/parallel.hpp"
#include "dfl/quadrature.hpp"

namespace dfl {

namespace {

using MatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
constexpr std::size_t source_block = 256;

}  // namespace

MomentumGrid bank_grid_for(const MomentumAmplitude& amp, int n)
{
    if (amp.grid.layout != GridLayout::cartesian)
        throw Error(ErrorKind::layout_unsupported, "bank grids are derived from a cartesian amplitude grid");
    return MomentumGrid::cartesian(amp.grid.center, amp.grid.half_width, n);
}

PotentialState::PotentialState(std::shared_ptr<const MomentumAmplitude> amp, const Potential& pot,
                               std::shared_ptr<const EigenBank> bank, const PotentialStateOptions& opt)
    : amp_(std::move(amp)), pot_(pot), bank_(std::move(bank)), opt_(opt)
{
    const auto start = std::chrono::steady_clock::now();
    if (!amp_ || !bank_) throw Error(ErrorKind::invalid_argument, "potential state needs an amplitude and a bank");
    if (!amp_->has_profile()) throw Error(ErrorKind::profile_required, "potential state needs an amplitude profile");
    if (bank_->kgrid.layout != GridLayout::cartesian)
        throw Error(ErrorKind::layout_unsupported, "bank momentum grid must be cartesian");
    if (bank_->m != amp_->m) throw Error(ErrorKind::bank_mismatch, "bank and amplitude masses differ");
    if (opt_.cheb_nodes < 4 || opt_.polar_order < 4 || opt_.n_phi < 4)
        throw Error(ErrorKind::invalid_argument, "potential state quadrature orders must be >= 4");

    const SpatialGrid& g = bank_->grid;
    const int N = g.N;
    const std::size_t nn = g.size();
    const double m = amp_->m;
    const auto support = amp_->profile->radial_support();
    const Chebyshev cheb(support[0], support[1], opt_.cheb_nodes);
    rho_ = cheb.nodes();
    const std::size_t nc = rho_.size();

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < nn; ++i)
        if (!pot_.is_zero() && pot_.magnitude(g.node(i)) != 0.0) active.push_back(i);
    for (std::size_t i : active) src_.push_back(g.node(i));
    const std::size_t ns = active.size();
    T_.assign(nc * ns, Spinor4{});
    if (ns == 0) return;

    const Frame fr = Frame::aligned(amp_->profile->peak_direction());
    const Rule& gu = gauss_legendre(opt_.polar_order);
    std::vector<Vec3> dirs;
    std::vector<double> wdir;
    for (std::size_t j = 0; j < gu.size(); ++j) {
        const double st = std::sqrt(std::max(0.0, 1.0 - gu.x[j] * gu.x[j]));
        for (int l = 0; l < opt_.n_phi; ++l) {
            const double ph = 2.0 * pi * l / opt_.n_phi;
            dirs.push_back(fr.to_global(st * std::cos(ph), st * std::sin(ph), gu.x[j]));
            wdir.push_back(gu.w[j] * 2.0 * pi / opt_.n_phi);
        }
    }
    double peak = 0.0;
    for (std::size_t i = 0; i < amp_->size(); ++i)
        peak = std::max(peak, std::abs(amp_->f1[i]) + std::abs(amp_->f2[i]));
    const double skip = 1e-17 * peak;

    const std::size_t nb = 2 * bank_->nodes();
    MatrixXcd W = MatrixXcd::Zero(static_cast<Eigen::Index>(nc), static_cast<Eigen::Index>(nb));
    std::vector<Spinor4> P(nc * nn);
    parallel_for_dynamic(nc, [&](std::size_t c) {
        const double rho = rho_[c];
        std::vector<cplx> ex(N), ey(N), ez(N);
        Spinor4* row = &P[c * nn];
        std::array<std::size_t, 8> node;
        std::array<double, 8> cw;
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const Vec3 k = rho * dirs[d];
            const auto ch = amp_->channels_at(k);
            if (std::abs(ch[0]) + std::abs(ch[1]) <= skip) continue;
            const Spinor4 a = cplx(wdir[d]) * combine_spinors(k, m, ch[0], ch[1]);
            for (int i = 0; i < N; ++i) {
                const double x = g.coordinate(i);
                ex[i] = std::polar(1.0, k.x * x);
                ey[i] = std::polar(1.0, k.y * x);
                ez[i] = std::polar(1.0, k.z * x);
            }
            for (int kk = 0; kk < N; ++kk)
                for (int jj = 0; jj < N; ++jj) {
                    const cplx yz = ey[jj] * ez[kk];
                    Spinor4* r = row + g.index(0, jj, kk);
                    for (int ii = 0; ii < N; ++ii) axpy(r[ii], ex[ii] * yz, a);
                }
            const int n = stencil(k, node, cw);
            for (int q = 0; q < n; ++q)
                for (int s = 0; s < 2; ++s) W(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(2 * node[q] + s)) += wdir[d] * cw[q] * ch[s];
        }
    });

    // Interpolated zeta part as (nc x nb) * (nb x 4 ns), blocked over sources.
    const std::size_t nblocks = (ns + source_block - 1) / source_block;
    parallel_for_dynamic(nblocks, [&](std::size_t blk) {
        const std::size_t j0 = blk * source_block, nj = std::min(source_block, ns - j0);
        MatrixXcd B(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(4 * nj));
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& z = bank_->fields[b].zeta;
            for (std::size_t j = 0; j < nj; ++j)
                for (int comp = 0; comp < 4; ++comp) B(b, 4 * j + comp) = z[active[j0 + j]][comp];
        }
        const MatrixXcd Z = W * B;
        for (std::size_t c = 0; c < nc; ++c)
            for (std::size_t j = 0; j < nj; ++j) {
                const std::size_t node = active[j0 + j];
                Spinor4 v = P[c * nn + node];
                for (int comp = 0; comp < 4; ++comp) v[comp] += Z(c, 4 * j + comp);
                T_[c * ns + j0 + j] = cplx(g.weight(node)) * pot_.apply(g.node(node), v);
            }
    });
    setup_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int PotentialState::stencil(const Vec3& k, std::array<std::size_t, 8>& node, std::array<double, 8>& w) const
{
    const MomentumGrid& kg = bank_->kgrid;
    const int n = kg.shape[0];
    std::array<int, 3> i0{};
    std::array<double, 3> f{};
    for (int a = 0; a < 3; ++a) {
        const double u = (k[a] - kg.center[a] + kg.half_width) / kg.spacing;
        if (u < -1e-12 || u > n - 1 + 1e-12) return 0;
        i0[a] = std::clamp(static_cast<int>(std::floor(u)), 0, n - 2);
        f[a] = std::clamp(u - i0[a], 0.0, 1.0);
    }
    for (int q = 0; q < 8; ++q) {
        const int dx = q & 1, dy = (q >> 1) & 1, dz = (q >> 2) & 1;
        node[q] = kg.index(i0[0] + dx, i0[1] + dy, i0[2] + dz);
        w[q] = (dx ? f[0] : 1.0 - f[0]) * (dy ? f[1] : 1.0 - f[1]) * (dz ? f[2] : 1.0 - f[2]);
    }
    return 8;
}

std::vector<Spinor4> PotentialState::interpolated_zeta(const Vec3& k, int s) const
{
    if (s != 1 && s != 2) throw Error(ErrorKind::invalid_argument, "spin channel must be 1 or 2");
    std::vector<Spinor4> out(bank_->grid.size());
    std::array<std::size_t, 8> node;
    std::array<double, 8> w;
    const int n = stencil(k, node, w);
    for (int q = 0; q < n; ++q) {
        const auto& z = bank_->field(node[q], s).zeta;
        for (std::size_t i = 0; i < out.size(); ++i) axpy(out[i], cplx(w[q]), z[i]);
    }
    return out;
}

void PotentialState::add_scattered(SpectralEvaluator& ev) const
{
    const std::size_t np = ev.points(), nf = ev.radial_size(), nc = rho_.size(), ns = src_.size();
    if (np == 0 || ns == 0) return;
    const auto support = amp_->profile->radial_support();
    const Chebyshev cheb(support[0], support[1], static_cast<int>(nc));
    std::vector<double> L(nf * nc);
    for (std::size_t i = 0; i < nf; ++i) cheb.row(ev.radial_nodes()[i], std::span<double>(&L[i * nc], nc));
    const double m = amp_->m;

    parallel_for_dynamic(np, [&](std::size_t p) {
        const Vec3 x = ev.point(p);
        const double R = norm(x);
        std::vector<Spinor4> S(nc);
        double mag = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            const double rho = rho_[c];
            const double E = energy(rho, m);
            const Spinor4* Tc = &T_[c * ns];
            Spinor4 acc;
            for (std::size_t j = 0; j < ns; ++j) {
                const Vec3 d = x - src_[j];
                const GreenScalars gs = (d.x == 0.0 && d.y == 0.0 && d.z == 0.0)
                                            ? GreenScalars{green_self_cell_scalar(rho, bank_->grid.h()), {}}
                                            : green_scalars(rho, d);
                acc += apply_green_structure(E, m, gs.g0, gs.gj, Tc[j]);
            }
            S[c] = std::polar(1.0, -rho * R) * acc;
            mag = std::max(mag, norm_s(S[c]));
        }
        double fl = 0.0;
        for (std::size_t i = 0; i < nf; ++i) {
            Spinor4 v;
            const double* l = &L[i * nc];
            for (std::size_t c = 0; c < nc; ++c) axpy(v, cplx(l[c]), S[c]);
            const cplx e = ev.radial_weights()[i] * std::polar(1.0, ev.radial_nodes()[i] * R);
            for (int comp = 0; comp < 4; ++comp) ev.coefficient(p, i, comp) += e * v[comp];
            fl += std::abs(ev.radial_weights()[i]);
        }
        ev.add_rounding_floor(p, 64.0 * std::numeric_limits<double>::epsilon() * fl * mag * static_cast<double>(ns));
    });
}

SpectralEvaluator PotentialState::evaluator(std::vector<Vec3> points, double t_max, const SpectralOptions& opt) const
{
    SpectralEvaluator ev(*amp_, std::move(points), t_max, opt);
    add_scattered(ev);
    return ev;
}

std::vector<Spinor4> PotentialState::scattered(std::span<const Vec3> points, double t, const SpectralOptions& opt) const
{
    SpectralEvaluator ev(*amp_, std::vector<Vec3>(points.begin(), points.end()), std::abs(t), opt);
    for (std::size_t p = 0; p < ev.points(); ++p)
        for (std::size_t i = 0; i < ev.radial_size(); ++i)
            for (int c = 0; c < 4; ++c) ev.coefficient(p, i, c) = 0.0;
    add_scattered(ev);
    std::vector<Spinor4> out(points.size());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = ev.value(p, t);
    return out;
}

}  // namespace dfl
