// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/lippmann.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "dfl/parallel.hpp"

namespace dfl {

namespace {

int next_fast_size(int n)
{
    for (int m = n;; ++m) {
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

struct PlanPair {
    fftw_plan fwd = nullptr, bwd = nullptr;
};

// FFTW's planner is not thread safe; plans are made once per size and
// executed on fresh aligned arrays through the new-array interface.
PlanPair plans_for(int M)
{
    static std::mutex mu;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    const std::size_t n = static_cast<std::size_t>(M) * M * M;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    PlanPair p;
    p.fwd = fftw_plan_dft_3d(M, M, M, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_3d(M, M, M, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(buf);
    if (!p.fwd || !p.bwd) throw Error(ErrorKind::invalid_argument, "FFTW could not plan size " + std::to_string(M));
    cache.emplace(M, p);
    return p;
}

cplx* alloc_cplx(std::size_t n)
{
    auto* p = static_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!p) throw std::bad_alloc();
    return p;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

double sup_diff(std::span<const Spinor4> a, std::span<const Spinor4> b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, norm_s(a[i] - b[i]));
    return d;
}

}  // namespace

struct LseOperator::Fft {
    int M = 0;
    std::size_t n = 0;
    PlanPair plan;
    std::array<cplx*, 4> kern{};
    std::array<cplx*, 4> work{};

    explicit Fft(int m) : M(m), n(static_cast<std::size_t>(m) * m * m), plan(plans_for(m))
    {
        for (auto& p : kern) p = alloc_cplx(n);
        for (auto& p : work) p = alloc_cplx(n);
    }
    ~Fft()
    {
        for (auto* p : kern) fftw_free(p);
        for (auto* p : work) fftw_free(p);
    }
    std::size_t wrap(int i, int j, int k) const
    {
        auto w = [this](int a) { return static_cast<std::size_t>(a < 0 ? a + M : a); };
        return w(i) + static_cast<std::size_t>(M) * (w(j) + static_cast<std::size_t>(M) * w(k));
    }
};

LseOperator::LseOperator(const SpatialGrid& grid, const Potential& pot, double kmag, double m)
    : grid_(grid), k_(kmag), m_(m), E_(energy(kmag, m)), M_(next_fast_size(2 * grid.N - 1)), pot_(pot)
{
    if (!(kmag >= 0.0)) throw Error(ErrorKind::invalid_argument, "|k| must be >= 0");
    if (!(m > 0.0)) throw Error(ErrorKind::invalid_argument, "mass must be > 0");
    const std::size_t nn = grid_.size();
    w_.resize(nn);
    active_.resize(nn);
    zero_ = pot_.is_zero();
    for (std::size_t i = 0; i < nn; ++i) {
        w_[i] = grid_.weight(i);
        active_[i] = !zero_ && pot_.magnitude(grid_.node(i)) != 0.0;
    }
    if (zero_) return;

    fft_ = std::make_unique<Fft>(M_);
    Fft& F = *fft_;
    for (auto* p : F.kern) std::fill(p, p + F.n, cplx(0.0));
    const int N = grid_.N;
    const double h = grid_.h();
    const double scale = 1.0 / static_cast<double>(F.n);
    parallel_for(static_cast<std::size_t>(2 * N - 1), [&](std::size_t kk) {
        const int dk = static_cast<int>(kk) - (N - 1);
        for (int dj = -(N - 1); dj <= N - 1; ++dj)
            for (int di = -(N - 1); di <= N - 1; ++di) {
                const GreenScalars g = kernel_at(Vec3{di * h, dj * h, dk * h});
                const std::size_t at = F.wrap(di, dj, dk);
                F.kern[0][at] = g.g0 * scale;
                for (int j = 0; j < 3; ++j) F.kern[1 + j][at] = g.gj[j] * scale;
            }
    });
    for (auto* p : F.kern) fftw_execute_dft(F.plan.fwd, as_fftw(p), as_fftw(p));
}

LseOperator::~LseOperator() = default;

GreenScalars LseOperator::kernel_at(const Vec3& d) const
{
    if (d.x == 0.0 && d.y == 0.0 && d.z == 0.0) return GreenScalars{green_self_cell_scalar(k_, grid_.h()), {}};
    return green_scalars(k_, d);
}

void LseOperator::source(std::span<const Spinor4> f, std::vector<Spinor4>& s) const
{
    s.assign(grid_.size(), Spinor4{});
    parallel_for(grid_.size(), [&](std::size_t i) {
        if (active_[i]) s[i] = cplx(w_[i]) * pot_.apply(grid_.node(i), f[i]);
    });
}

void LseOperator::apply(std::span<const Spinor4> f, std::span<Spinor4> out) const
{
    const std::size_t nn = grid_.size();
    if (f.size() != nn || out.size() != nn) throw Error(ErrorKind::invalid_argument, "field size does not match the grid");
    if (zero_) {
        std::fill(out.begin(), out.end(), Spinor4{});
        return;
    }
    std::vector<Spinor4> src;
    source(f, src);
    Fft& F = *fft_;
    for (int c = 0; c < 4; ++c) {
        cplx* u = F.work[c];
        std::fill(u, u + F.n, cplx(0.0));
        for (std::size_t i = 0; i < nn; ++i) {
            const auto ijk = grid_.coords(i);
            u[F.wrap(ijk[0], ijk[1], ijk[2])] = src[i][c];
        }
        fftw_execute_dft(F.plan.fwd, as_fftw(u), as_fftw(u));
    }
    const double E = E_, m = m_;
    parallel_for(F.n, [&](std::size_t q) {
        Spinor4 U{{F.work[0][q], F.work[1][q], F.work[2][q], F.work[3][q]}};
        const Spinor4 o = apply_green_structure(E, m, F.kern[0][q], {F.kern[1][q], F.kern[2][q], F.kern[3][q]}, U);
        for (int c = 0; c < 4; ++c) F.work[c][q] = o[c];
    });
    for (int c = 0; c < 4; ++c) fftw_execute_dft(F.plan.bwd, as_fftw(F.work[c]), as_fftw(F.work[c]));
    parallel_for(nn, [&](std::size_t i) {
        const auto ijk = grid_.coords(i);
        const std::size_t at = F.wrap(ijk[0], ijk[1], ijk[2]);
        for (int c = 0; c < 4; ++c) out[i][c] = F.work[c][at];
    });
}

Spinor4 LseOperator::apply_at(std::span<const Spinor4> f, const Vec3& x, std::ptrdiff_t node) const
{
    Spinor4 acc;
    if (zero_) return acc;
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        if (!active_[j]) continue;
        const Spinor4 s = cplx(w_[j]) * pot_.apply(grid_.node(j), f[j]);
        const GreenScalars g = static_cast<std::ptrdiff_t>(j) == node ? kernel_at(Vec3{}) : green_scalars(k_, x - grid_.node(j));
        acc += apply_green_structure(E_, m_, g.g0, g.gj, s);
    }
    return acc;
}

void LseOperator::apply_reference(std::span<const Spinor4> f, std::span<Spinor4> out) const
{
    const std::size_t nn = grid_.size();
    if (f.size() != nn || out.size() != nn) throw Error(ErrorKind::invalid_argument, "field size does not match the grid");
    for (std::size_t i = 0; i < nn; ++i) out[i] = apply_at(f, grid_.node(i), static_cast<std::ptrdiff_t>(i));
}

//---------------------------------------------------------------------------//

bool ConvergenceRecord::monotone() const
{
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (deltas[i] > deltas[i - 1]) return false;
    return true;
}

Spinor4 plane_wave(const Vec3& k, int s, double m, const Vec3& x)
{
    if (s != 1 && s != 2) throw Error(ErrorKind::invalid_argument, "spin channel must be 1 or 2");
    return std::polar(1.0, dot(k, x)) * positive_spinors(k, m)[s - 1];
}

Spinor4 EigenfunctionField::spinor() const { return positive_spinors(k, m)[s - 1]; }

Spinor4 EigenfunctionField::phi(std::size_t node) const
{
    return std::polar(1.0, dot(k, grid.node(node))) * spinor();
}

EigenfunctionField born_solve(const LseOperator& op, const Vec3& k, int s, const LseOptions& opt)
{
    if (s != 1 && s != 2) throw Error(ErrorKind::invalid_argument, "spin channel must be 1 or 2");
    if (std::abs(norm(k) - op.kmag()) > 1e-12 * std::max(1.0, op.kmag()))
        throw Error(ErrorKind::invalid_argument, "operator was built for another |k|");
    if (opt.max_iter < 1) throw Error(ErrorKind::invalid_argument, "max_iter must be >= 1");
    EigenfunctionField f;
    f.k = k;
    f.s = s;
    f.m = op.mass();
    f.grid = op.grid();
    const std::size_t nn = f.grid.size();
    f.zeta.assign(nn, Spinor4{});
    std::vector<Spinor4> total(nn), next(nn);
    int rising = 0;
    for (int it = 1; it <= opt.max_iter; ++it) {
        for (std::size_t i = 0; i < nn; ++i) total[i] = f.phi(i) + f.zeta[i];
        op.apply(total, next);
        const double delta = sup_diff(next, f.zeta);
        f.zeta.swap(next);
        auto& rec = f.record;
        rec.iterations = it;
        rec.last_delta = delta;
        rec.deltas.push_back(delta);
        if (!std::isfinite(delta))
            throw Error(ErrorKind::no_contraction, "Born iteration diverged to a non-finite iterate");
        if (delta < opt.tol) {
            rec.converged = true;
            return f;
        }
        if (rec.deltas.size() >= 2) {
            rising = delta >= rec.deltas[rec.deltas.size() - 2] ? rising + 1 : 0;
            if (rising >= 3)
                throw Error(ErrorKind::no_contraction, "successive Born deltas did not shrink for 3 iterations (last " +
                                                           std::to_string(delta) + ")");
        }
    }
    if (!opt.allow_unconverged)
        throw Error(ErrorKind::tol_not_reached, "Born iteration stopped at max_iter with delta " +
                                                    std::to_string(f.record.last_delta));
    return f;
}

EigenfunctionField born_solve(const Potential& pot, const Vec3& k, int s, const SpatialGrid& grid, const LseOptions& opt)
{
    const LseOperator op(grid, pot, norm(k), opt.m);
    return born_solve(op, k, s, opt);
}

//---------------------------------------------------------------------------//

namespace {

double residual_impl(const SpatialGrid& g, const Vec3& k, double m, const Potential* pot, int stride,
                     const std::function<Spinor4(std::size_t)>& at)
{
    if (stride < 1) throw Error(ErrorKind::invalid_argument, "stride must be >= 1");
    const int margin = std::max(3, stride);
    const int N = g.N;
    if (N - 2 * margin < 1) throw Error(ErrorKind::grid_too_small, "no interior nodes for the residual");
    const double E = energy(k, m);
    const double step = 2.0 * stride * g.h();
    std::vector<double> best(static_cast<std::size_t>(N), 0.0);
    parallel_for(static_cast<std::size_t>(N - 2 * margin), [&](std::size_t kk) {
        const int c = margin + static_cast<int>(kk);
        double b = 0.0;
        for (int j = margin; j < N - margin; ++j)
            for (int i = margin; i < N - margin; ++i) {
                const std::size_t id = g.index(i, j, c);
                const Spinor4 v = at(id);
                Spinor4 r = cplx(-E) * v + cplx(m) * apply_beta(v);
                if (pot) r += pot->apply(g.node(id), v);
                const std::array<std::size_t, 3> plus{g.index(i + stride, j, c), g.index(i, j + stride, c),
                                                      g.index(i, j, c + stride)};
                const std::array<std::size_t, 3> minus{g.index(i - stride, j, c), g.index(i, j - stride, c),
                                                       g.index(i, j, c - stride)};
                for (int l = 0; l < 3; ++l) {
                    const Spinor4 d = (at(plus[l]) - at(minus[l])) * cplx(1.0 / step);
                    axpy(r, cplx(0.0, -1.0), apply_alpha(l, d));
                }
                b = std::max(b, norm_s(r));
            }
        best[kk] = b;
    });
    double out = 0.0;
    for (double b : best) out = std::max(out, b);
    return out;
}

}  // namespace

double eigen_residual(const EigenfunctionField& field, const Potential& pot, int stride)
{
    return residual_impl(field.grid, field.k, field.m, &pot, stride,
                         [&](std::size_t i) { return field.phi_tilde(i); });
}

double free_residual_floor(const Vec3& k, int s, double m, const SpatialGrid& grid, int stride)
{
    const Spinor4 sp = positive_spinors(k, m)[s - 1];
    return residual_impl(grid, k, m, nullptr, stride,
                         [&](std::size_t i) { return std::polar(1.0, dot(k, grid.node(i))) * sp; });
}

DecayCertificate zeta_decay_certificate(const EigenfunctionField& field, int shells)
{
    if (shells < 2) throw Error(ErrorKind::invalid_argument, "need at least two shells");
    DecayCertificate c;
    const double L = field.grid.L;
    for (int j = 0; j <= shells; ++j) c.edges.push_back(L * j / shells);
    c.shell_max.assign(static_cast<std::size_t>(shells), 0.0);
    for (std::size_t i = 0; i < field.grid.size(); ++i) {
        const double r = norm(field.grid.node(i));
        const double v = r * norm_s(field.zeta[i]);
        const int sh = std::min(shells - 1, static_cast<int>(r / L * shells));
        c.shell_max[sh] = std::max(c.shell_max[sh], v);
        if (r <= 0.5 * L) c.inner_max = std::max(c.inner_max, v);
        c.sup = std::max(c.sup, v);
    }
    c.outer_max = c.shell_max.back();
    c.passed = c.outer_max <= 1.1 * c.inner_max;
    return c;
}

HolderReport holder_check(const EigenfunctionField& field, int samples, std::uint64_t seed)
{
    HolderReport rep;
    const SpatialGrid& g = field.grid;
    const int N = g.N;
    const int reach = 4;
    if (N < 2 * reach + 2) throw Error(ErrorKind::grid_too_small, "grid too small for the difference quotients");
    const double h = g.h();
    // Lipschitz allowance from the central differences of zeta.
    double dz = 0.0;
    for (int c = 1; c < N - 1; ++c)
        for (int j = 1; j < N - 1; ++j)
            for (int i = 1; i < N - 1; ++i) {
                const std::size_t pl[3] = {g.index(i + 1, j, c), g.index(i, j + 1, c), g.index(i, j, c + 1)};
                const std::size_t mi[3] = {g.index(i - 1, j, c), g.index(i, j - 1, c), g.index(i, j, c - 1)};
                for (int l = 0; l < 3; ++l) dz = std::max(dz, norm_s(field.zeta[pl[l]] - field.zeta[mi[l]]) / (2.0 * h));
            }
    rep.bound = norm(field.k) * norm_s(field.spinor()) + 1.5 * dz;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pos(0, N - 1 - reach);
    std::uniform_int_distribution<int> axis(0, 2);
    for (int step = 1; step <= reach; ++step) {
        rep.steps.push_back(step);
        rep.max_quotient.push_back(0.0);
    }
    for (int n = 0; n < samples; ++n) {
        std::array<int, 3> a{pos(rng), pos(rng), pos(rng)};
        const int l = axis(rng);
        const std::size_t base = g.index(a[0], a[1], a[2]);
        for (int step = 1; step <= reach; ++step) {
            std::array<int, 3> b = a;
            b[l] += step;
            const std::size_t other = g.index(b[0], b[1], b[2]);
            const double q = norm_s(field.phi_tilde(other) - field.phi_tilde(base)) / (step * h);
            rep.max_quotient[step - 1] = std::max(rep.max_quotient[step - 1], q);
        }
    }
    for (double q : rep.max_quotient)
        if (!(q <= rep.bound)) rep.bounded = false;
    return rep;
}

double fixed_point_residual(const EigenfunctionField& field, const Potential& pot, int stride)
{
    if (stride < 1) throw Error(ErrorKind::invalid_argument, "stride must be >= 1");
    const LseOperator op(field.grid, pot, norm(field.k), field.m);
    const std::size_t nn = field.grid.size();
    std::vector<Spinor4> total(nn);
    for (std::size_t i = 0; i < nn; ++i) total[i] = field.phi_tilde(i);
    std::vector<std::size_t> picks;
    for (std::size_t i = 0; i < nn; i += static_cast<std::size_t>(stride)) picks.push_back(i);
    std::vector<double> r(picks.size());
    parallel_for(picks.size(), [&](std::size_t n) {
        const std::size_t i = picks[n];
        r[n] = norm_s(op.apply_at(total, field.grid.node(i), static_cast<std::ptrdiff_t>(i)) - field.zeta[i]);
    });
    double out = 0.0;
    for (double v : r) out = std::max(out, v);
    return out;
}

}  // namespace dfl
