// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/propagator.hpp"

#include <limits>
#include <sstream>

#include "dfl/parallel.hpp"

namespace dfl {

namespace {

constexpr double inv_2pi_32 = 0.063493635934240969;  // (2 pi)^{-3/2}

}  // namespace

WaveEvaluator::WaveEvaluator(const MomentumAmplitude& amp)
{
    const std::size_t n = amp.size();
    kx_.resize(n);
    ky_.resize(n);
    kz_.resize(n);
    E_.resize(n);
    c_.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const Vec3& k = amp.grid.nodes[i];
        kx_[i] = k.x;
        ky_[i] = k.y;
        kz_[i] = k.z;
        E_[i] = energy(k, amp.m);
        c_[i] = (inv_2pi_32 * amp.grid.weights[i]) * synthesize(amp, i);
    });
    resolution_ = amp.grid.resolution();
}

double WaveEvaluator::aliasing_radius() const
{
    return resolution_ > 0.0 ? pi / resolution_ : std::numeric_limits<double>::infinity();
}

void WaveEvaluator::guard(const SpacetimePoint& p) const
{
    if (norm(p.x) * resolution_ > pi) {
        std::ostringstream os;
        os << "|x| = " << norm(p.x) << " exceeds pi / spacing = " << aliasing_radius()
           << "; phase undersampled on this grid";
        throw Error(ErrorKind::aliasing, os.str());
    }
}

Spinor4 WaveEvaluator::block_sum(const SpacetimePoint& p, std::size_t lo, std::size_t hi) const
{
    Spinor4 acc;
    for (std::size_t i = lo; i < hi; ++i) {
        const double ph = kx_[i] * p.x.x + ky_[i] * p.x.y + kz_[i] * p.x.z - E_[i] * p.t;
        axpy(acc, cplx{std::cos(ph), std::sin(ph)}, c_[i]);
    }
    return acc;
}

Spinor4 WaveEvaluator::operator()(const SpacetimePoint& p) const
{
    guard(p);
    const std::size_t n = size();
    const std::size_t nb = (n + reduction_block - 1) / reduction_block;
    std::vector<Spinor4> partial(nb);
    parallel_for(nb, [&](std::size_t b) {
        partial[b] = block_sum(p, b * reduction_block, std::min(n, (b + 1) * reduction_block));
    });
    Spinor4 total;
    for (const auto& v : partial) total += v;
    return total;
}

std::vector<Spinor4> WaveEvaluator::batch(std::span<const SpacetimePoint> pts) const
{
    for (const auto& p : pts) guard(p);
    std::vector<Spinor4> out(pts.size());
    const std::size_t n = size();
    parallel_for(pts.size(), [&](std::size_t j) {
        Spinor4 total;
        for (std::size_t lo = 0; lo < n; lo += reduction_block)
            total += block_sum(pts[j], lo, std::min(n, lo + reduction_block));
        out[j] = total;
    });
    return out;
}

Spinor4 WaveEvaluator::serial_reference(const SpacetimePoint& p) const
{
    guard(p);
    std::array<CompensatedSum<cplx>, 4> acc;
    for (std::size_t r = size(); r-- > 0;) {
        const double ph = kx_[r] * p.x.x + ky_[r] * p.x.y + kz_[r] * p.x.z - E_[r] * p.t;
        const cplx e = std::polar(1.0, ph);
        for (int c = 0; c < 4; ++c) acc[c].add(e * c_[r][c]);
    }
    Spinor4 out;
    for (int c = 0; c < 4; ++c) out[c] = acc[c].value();
    return out;
}

Spinor4 evaluate_wave(const MomentumAmplitude& amp, const SpacetimePoint& p) { return WaveEvaluator(amp)(p); }

FluxVector flux_at(const MomentumAmplitude& amp, const SpacetimePoint& p) { return flux(evaluate_wave(amp, p)); }

ContinuityResidual continuity_residual(const WaveEvaluator& wave, const SpacetimePoint& p, double h)
{
    if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "continuity step must be positive");
    std::vector<SpacetimePoint> pts;
    pts.push_back({p.x, p.t + h});
    pts.push_back({p.x, p.t - h});
    for (int l = 0; l < 3; ++l) {
        Vec3 d{};
        d[l] = h;
        pts.push_back({p.x + d, p.t});
        pts.push_back({p.x - d, p.t});
    }
    const auto v = wave.batch(pts);
    const double dt = (flux(v[0]).j0 - flux(v[1]).j0) / (2.0 * h);
    double div = 0.0;
    for (int l = 0; l < 3; ++l) div += (flux(v[2 + 2 * l]).j[l] - flux(v[3 + 2 * l]).j[l]) / (2.0 * h);
    return {std::abs(dt + div), std::abs(dt - div)};
}

ContinuityResidual continuity_residual(const MomentumAmplitude& amp, const SpacetimePoint& p, double h)
{
    return continuity_residual(WaveEvaluator(amp), p, h);
}

}  // namespace dfl
