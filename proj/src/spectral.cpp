// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/spectral.hpp"

#include <Eigen/Dense>
#include <limits>

#include "dfl/parallel.hpp"
#include "dfl/quadrature.hpp"

namespace dfl {

namespace {

constexpr double inv_2pi_32 = 0.063493635934240969;
constexpr std::size_t row_block = 256;
constexpr std::size_t time_block = 64;
constexpr std::size_t fine_block = 512;

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

Rule adaptive_radial_rule(double a, double b, double m, double R, double t_max, const SpectralOptions& opt)
{
    Rule r;
    double pos = a;
    const double base = std::abs(R) + opt.envelope_frequency;
    while (pos < b) {
        const double probe = std::min(b, pos + opt.panel_phase / base);
        const double omega = base + std::abs(t_max) * probe / energy(probe, m);
        double end = std::min(b, pos + opt.panel_phase / omega);
        // Avoid a sliver panel at the end.
        if (b - end < 0.25 * (end - pos)) end = b;
        const Rule q = gauss_legendre(opt.panel_order, pos, end);
        r.x.insert(r.x.end(), q.x.begin(), q.x.end());
        r.w.insert(r.w.end(), q.w.begin(), q.w.end());
        pos = end;
    }
    return r;
}

SpectralEvaluator::SpectralEvaluator(const MomentumAmplitude& amp, std::vector<Vec3> points, double t_max,
                                     const SpectralOptions& opt)
    : points_(std::move(points)), t_max_(std::abs(t_max)), m_(amp.m)
{
    if (!amp.has_profile())
        throw Error(ErrorKind::profile_required, "spectral evaluation needs an off-grid amplitude profile");
    if (opt.polar_nodes <= opt.legendre_order)
        throw Error(ErrorKind::invalid_argument, "polar_nodes must exceed legendre_order");

    const auto support = amp.profile->radial_support();
    double rmax = 0.0;
    for (const auto& x : points_) rmax = std::max(rmax, norm(x));
    const Rule fine = adaptive_radial_rule(support[0], support[1], m_, rmax, t_max_, opt);
    rho_ = fine.x;
    const std::size_t nf = rho_.size();
    w_.resize(nf);
    E_.resize(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        E_[i] = energy(rho_[i], m_);
        w_[i] = fine.w[i] * inv_2pi_32 * rho_[i] * rho_[i];
    }

    const std::size_t np = points_.size();
    coef_.assign(4 * np * nf, 0.0);
    floor_.assign(np, 0.0);
    if (np == 0) return;

    const Chebyshev cheb(support[0], support[1], opt.cheb_nodes);
    const int nc = cheb.size();
    const int Q = opt.legendre_order;
    const int nq = Q + 1;
    RowMatrixXd L(nf, nc);
    for (std::size_t i = 0; i < nf; ++i) cheb.row(rho_[i], std::span<double>(L.row(i).data(), nc));

    const Rule& gu = gauss_legendre(opt.polar_nodes);
    const int nu = static_cast<int>(gu.size());
    std::vector<double> Pq(static_cast<std::size_t>(nu) * nq);
    for (int j = 0; j < nu; ++j) legendre_values(Q, gu.x[j], std::span<double>(&Pq[j * nq], nq));
    std::vector<double> cphi(opt.n_phi), sphi(opt.n_phi);
    for (int l = 0; l < opt.n_phi; ++l) {
        cphi[l] = std::cos(2.0 * pi * l / opt.n_phi);
        sphi[l] = std::sin(2.0 * pi * l / opt.n_phi);
    }
    const double wphi = 2.0 * pi / opt.n_phi;
    const Vec3 fallback_axis = amp.profile->peak_direction();

    const std::size_t chunk = std::max<std::size_t>(1, opt.point_chunk);
    const std::size_t nchunks = (np + chunk - 1) / chunk;

    parallel_for_dynamic(nchunks, [&](std::size_t ch) {
        const std::size_t p0 = ch * chunk, p1 = std::min(np, p0 + chunk);
        const std::size_t cp = p1 - p0;
        const std::size_t cols = cp * nq * 8;
        RowMatrixXd beta = RowMatrixXd::Zero(nc, cols);
        std::vector<Spinor4> B(nu);

        for (std::size_t pp = 0; pp < cp; ++pp) {
            const Vec3& x = points_[p0 + pp];
            const double R = norm(x);
            const Frame fr = Frame::aligned(R > 0.0 ? x : fallback_axis);
            for (int c = 0; c < nc; ++c) {
                const double rho = cheb.nodes()[c];
                for (int j = 0; j < nu; ++j) {
                    const double u = gu.x[j];
                    const double st = std::sqrt(std::max(0.0, 1.0 - u * u));
                    Spinor4 acc;
                    for (int l = 0; l < opt.n_phi; ++l) {
                        const Vec3 k = rho * fr.to_global(st * cphi[l], st * sphi[l], u);
                        acc += amp.spinor_at(k);
                    }
                    B[j] = acc * cplx(wphi);
                }
                double* row = beta.row(c).data() + pp * nq * 8;
                for (int q = 0; q < nq; ++q) {
                    Spinor4 b;
                    for (int j = 0; j < nu; ++j) axpy(b, gu.w[j] * Pq[j * nq + q], B[j]);
                    const double f = 0.5 * (2 * q + 1);
                    for (int comp = 0; comp < 4; ++comp) {
                        row[(q * 4 + comp) * 2] = f * b[comp].real();
                        row[(q * 4 + comp) * 2 + 1] = f * b[comp].imag();
                    }
                }
            }
        }

        std::vector<double> jq(nq);
        RowMatrixXd fine_beta;
        for (std::size_t f0 = 0; f0 < nf; f0 += fine_block) {
            const std::size_t nrow = std::min(fine_block, nf - f0);
            fine_beta.noalias() = L.middleRows(f0, nrow) * beta;
            for (std::size_t pp = 0; pp < cp; ++pp) {
                const std::size_t p = p0 + pp;
                const double R = norm(points_[p]);
                double fl = 0.0;
                for (std::size_t r = 0; r < nrow; ++r) {
                    const std::size_t i = f0 + r;
                    spherical_bessel_j(Q, rho_[i] * R, jq);
                    const double* bq = fine_beta.row(r).data() + pp * nq * 8;
                    std::array<cplx, 4> A{};
                    double mag = 0.0;
                    for (int q = 0; q < nq; ++q) {
                        // 2 i^q j_q
                        const double s = 2.0 * jq[q];
                        const cplx iq = (q % 4 == 0) ? cplx(s, 0) : (q % 4 == 1) ? cplx(0, s) : (q % 4 == 2) ? cplx(-s, 0) : cplx(0, -s);
                        for (int comp = 0; comp < 4; ++comp) {
                            const cplx b{bq[(q * 4 + comp) * 2], bq[(q * 4 + comp) * 2 + 1]};
                            A[comp] += iq * b;
                            mag += std::abs(s) * std::abs(b);
                        }
                    }
                    for (int comp = 0; comp < 4; ++comp) coefficient(p, i, comp) = w_[i] * A[comp];
                    fl += std::abs(w_[i]) * mag;
                }
                floor_[p] += 64.0 * std::numeric_limits<double>::epsilon() * fl;
            }
        }
    });
}

Spinor4 SpectralEvaluator::value(std::size_t p, double t) const
{
    const std::size_t nf = rho_.size();
    Spinor4 out;
    for (std::size_t i = 0; i < nf; ++i) {
        const cplx e = std::polar(1.0, -E_[i] * t);
        for (int c = 0; c < 4; ++c) out[c] += coefficient(p, i, c) * e;
    }
    return out;
}

std::vector<Spinor4> SpectralEvaluator::values(std::span<const double> times) const
{
    const std::size_t np = points_.size(), nf = rho_.size(), nt = times.size();
    std::vector<Spinor4> out(nt * np);
    if (np == 0 || nt == 0) return out;
    const std::size_t rows = 4 * np;
    const std::size_t nrb = (rows + row_block - 1) / row_block;
    const std::size_t ntb = (nt + time_block - 1) / time_block;

    Eigen::Map<const RowMatrixXcd> C(coef_.data(), rows, nf);
    parallel_for_dynamic(nrb * ntb, [&](std::size_t task) {
        const std::size_t rb = task / ntb, tb = task % ntb;
        const std::size_t r0 = rb * row_block, nr = std::min(row_block, rows - r0);
        const std::size_t t0 = tb * time_block, ntt = std::min(time_block, nt - t0);
        Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic> ph(nf, ntt);
        for (std::size_t j = 0; j < ntt; ++j)
            for (std::size_t i = 0; i < nf; ++i) ph(i, j) = std::polar(1.0, -E_[i] * times[t0 + j]);
        Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic> res = C.middleRows(r0, nr) * ph;
        for (std::size_t r = 0; r < nr; ++r) {
            const std::size_t row = r0 + r;
            for (std::size_t j = 0; j < ntt; ++j) out[(t0 + j) * np + row / 4][row % 4] = res(r, j);
        }
    });
    return out;
}

std::vector<Spinor4> SpectralEvaluator::values_reference(std::span<const double> times) const
{
    const std::size_t np = points_.size(), nt = times.size();
    std::vector<Spinor4> out(nt * np);
    for (std::size_t j = 0; j < nt; ++j)
        for (std::size_t p = 0; p < np; ++p) out[j * np + p] = value(p, times[j]);
    return out;
}

SpacelikeReport spacelike_decay_check(const MomentumAmplitude& amp, double eta, std::span<const double> x_list,
                                      const Vec3& direction, const SpectralOptions& opt)
{
    if (eta < 0.0 || eta > 1.0) throw Error(ErrorKind::invalid_argument, "eta must lie in [0, 1]");
    for (std::size_t i = 1; i < x_list.size(); ++i)
        if (!(x_list[i] > x_list[i - 1])) throw Error(ErrorKind::invalid_argument, "x_list must increase");
    SpacelikeReport rep;
    if (x_list.empty()) return rep;
    const Vec3 e = normalized(direction);
    std::vector<Vec3> pts;
    for (double x : x_list) pts.push_back(x * e);
    const SpectralEvaluator ev(amp, pts, eta * x_list.back(), opt);
    for (std::size_t i = 0; i < x_list.size(); ++i) {
        const double x = x_list[i];
        const double v = x * x * norm_s(ev.value(i, eta * x));
        rep.x.push_back(x);
        rep.scaled.push_back(v);
        rep.floor.push_back(x * x * ev.rounding_floor(i));
        rep.sup = std::max(rep.sup, v);
        if (v > rep.scaled.front() + rep.floor.back()) rep.bounded = false;
    }
    return rep;
}

}  // namespace dfl
