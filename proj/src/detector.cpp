// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/detector.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "dfl/parallel.hpp"
#include "dfl/quadrature.hpp"

namespace dfl {

FreeState::FreeState(std::shared_ptr<const MomentumAmplitude> amp) : amp_(std::move(amp))
{
    if (!amp_) throw Error(ErrorKind::invalid_argument, "free state needs an amplitude");
}

SpectralEvaluator FreeState::evaluator(std::vector<Vec3> points, double t_max, const SpectralOptions& opt) const
{
    return SpectralEvaluator(*amp_, std::move(points), t_max, opt);
}

double SurfaceQuadrature::total_weight() const
{
    CompensatedSum<double> s;
    for (double w : weights) s.add(w);
    return s.value();
}

SurfaceQuadrature sphere_quadrature(double R, const ConeSpec& cone, int n_theta, int n_phi)
{
    if (!(R > 0.0)) throw Error(ErrorKind::invalid_argument, "detector radius must be > 0");
    if (n_theta < 4 || n_phi < 4) throw Error(ErrorKind::invalid_argument, "n_theta and n_phi must be >= 4");
    SurfaceQuadrature s;
    s.R = R;
    s.cone = cone;
    const double u0 = cone.full_sphere() ? -1.0 : std::cos(cone.half_angle);
    const Rule gu = gauss_legendre(n_theta, u0, 1.0);
    const Frame fr = Frame::aligned(cone.axis);
    const double dphi = 2.0 * pi / n_phi;
    for (int j = 0; j < n_theta; ++j) {
        const double u = gu.x[j];
        const double st = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int l = 0; l < n_phi; ++l) {
            const double ph = dphi * l;
            const Vec3 n = normalized(fr.to_global(st * std::cos(ph), st * std::sin(ph), u));
            s.normals.push_back(n);
            s.points.push_back(R * n);
            s.weights.push_back(R * R * gu.w[j] * dphi);
        }
    }
    return s;
}

double default_k_min(const MomentumAmplitude& amp)
{
    const Vec3 mean = amp.mean_momentum();
    const double P = amp.probability();
    double var = 0.0;
    if (P > 0.0) {
        var = blocked_sum<double>(amp.size(), [&](std::size_t i) {
            const Vec3 d = amp.grid.nodes[i] - mean;
            return amp.grid.weights[i] * (std::norm(amp.f1[i]) + std::norm(amp.f2[i])) * dot(d, d);
        }) / (3.0 * P);
    }
    return std::max(norm(mean) - 5.0 * std::sqrt(var), 0.2 * amp.m);
}

double default_t_max(double R, double k_min, double m)
{
    if (!(k_min > 0.0)) throw Error(ErrorKind::invalid_argument, "k_min must be > 0");
    return R * energy(k_min, m) / k_min;
}

int default_n_t(double R, double m)
{
    int n = std::max(400, static_cast<int>(std::ceil(8.0 * R * m)));
    return n + (n % 2);
}

namespace {

int even_at_least(double x, int lo)
{
    int n = std::max(lo, static_cast<int>(std::ceil(x)));
    return n + (n % 2);
}

//! Per-time surface sums of w j.n, w |j|, w j0 and w j0 angle(j, n).
struct SurfaceSums {
    std::vector<double> jn, jabs, j0, angle;
};

SurfaceSums surface_sums(const SpectralEvaluator& ev, const SurfaceQuadrature& s, std::span<const double> times)
{
    constexpr std::size_t chunk = 256;
    const std::size_t nt = times.size(), np = s.size();
    SurfaceSums out;
    out.jn.resize(nt);
    out.jabs.resize(nt);
    out.j0.resize(nt);
    out.angle.resize(nt);
    for (std::size_t t0 = 0; t0 < nt; t0 += chunk) {
        const std::size_t n = std::min(chunk, nt - t0);
        const std::vector<Spinor4> psi = ev.values(times.subspan(t0, n));
        parallel_for(n, [&](std::size_t j) {
            CompensatedSum<double> a, b, c, d;
            for (std::size_t p = 0; p < np; ++p) {
                const FluxVector f = flux(psi[j * np + p]);
                const double w = s.weights[p];
                const double jn = dot(f.j, s.normals[p]);
                const double ja = norm(f.j);
                a.add(w * jn);
                b.add(w * ja);
                c.add(w * f.j0);
                if (ja > 0.0) d.add(w * f.j0 * std::acos(std::clamp(jn / ja, -1.0, 1.0)));
            }
            out.jn[t0 + j] = a.value();
            out.jabs[t0 + j] = b.value();
            out.j0[t0 + j] = c.value();
            out.angle[t0 + j] = d.value();
        });
    }
    return out;
}

double weighted(const Rule& r, const std::vector<double>& f, std::size_t offset = 0)
{
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < r.size(); ++i) s.add(r.w[i] * f[offset + i]);
    return s.value();
}

//! Composite Gauss-Legendre on [a, b] with panels no longer than `len`.
Rule panels(double a, double b, double len, int order)
{
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / len)));
    return composite_gauss_legendre(a, b, n, order);
}

//! Time grid shared by the direct and substituted integrals on one surface.
//! The direct integrals use one Simpson rule over [0, t_max] so the transit
//! sits in its interior; pieces that end at t = R use Gauss-Legendre panels.
struct TimePlan {
    double R = 0.0, t_max = 0.0, k_min = 0.0, k_top = 0.0, t_top = 0.0;
    Rule direct;    // [0, t_max]
    Rule early;     // [0, R]
    Rule sliver;    // [R, t(k_top)]
    Rule kq;        // k in [k_min, k_top]
    std::vector<double> all;
    std::size_t off_early = 0, off_sliver = 0, off_k = 0;
};

TimePlan make_plan(double R, double t_max, int n_t, double k_min, double k_top, double m, const DetectorOptions& opt,
                   bool substituted)
{
    TimePlan tp;
    tp.R = R;
    tp.t_max = t_max;
    tp.direct = simpson(0.0, t_max, even_at_least(n_t, 8));
    tp.early = panels(0.0, R, opt.t_panel, opt.k_order);
    tp.all = tp.direct.x;
    tp.off_early = tp.all.size();
    tp.all.insert(tp.all.end(), tp.early.x.begin(), tp.early.x.end());
    if (substituted && k_min < k_top) {
        tp.k_min = k_min;
        tp.k_top = k_top;
        tp.t_top = R * energy(k_top, m) / k_top;
        tp.sliver = panels(R, tp.t_top, opt.t_panel, opt.k_order);
        // Panels bounded in k and in t; dt/dk is largest at the panel start.
        double a = k_min;
        while (a < k_top) {
            const double dtdk = R * m * m / (energy(a, m) * a * a);
            double b = std::min({k_top, a + opt.k_panel, a + opt.t_panel / dtdk});
            if (k_top - b < 0.25 * (b - a)) b = k_top;
            const Rule q = gauss_legendre(opt.k_order, a, b);
            tp.kq.x.insert(tp.kq.x.end(), q.x.begin(), q.x.end());
            tp.kq.w.insert(tp.kq.w.end(), q.w.begin(), q.w.end());
            a = b;
        }
        tp.off_sliver = tp.all.size();
        tp.all.insert(tp.all.end(), tp.sliver.x.begin(), tp.sliver.x.end());
        tp.off_k = tp.all.size();
        for (double k : tp.kq.x) tp.all.push_back(R * energy(k, m) / k);
    }
    return tp;
}

struct PlanResult {
    TimeIntegral direct, abs, substituted;
    double covariant = 0.0;
    double alignment = 0.0;
};

PlanResult integrate_plan(const SpectralEvaluator& ev, const SurfaceQuadrature& s, const TimePlan& tp, double m)
{
    const SurfaceSums sums = surface_sums(ev, s, tp.all);
    const std::size_t nd = tp.direct.size();
    PlanResult r;
    const double early = weighted(tp.early, sums.jn, tp.off_early);
    r.direct.value = weighted(tp.direct, sums.jn, 0);
    r.direct.spacelike = early;
    r.abs.value = weighted(tp.direct, sums.jabs, 0);
    r.abs.spacelike = weighted(tp.early, sums.jabs, tp.off_early);

    double peak = 0.0, peak_abs = 0.0;
    for (std::size_t i = 0; i < nd; ++i) {
        peak = std::max(peak, std::abs(sums.jn[i]));
        peak_abs = std::max(peak_abs, sums.jabs[i]);
    }
    r.direct.peak_flux = peak;
    r.direct.end_flux = std::abs(sums.jn[nd - 1]);
    r.direct.truncation_warning = r.direct.end_flux > 1e-6 * peak;
    r.abs.peak_flux = peak_abs;
    r.abs.end_flux = sums.jabs[nd - 1];
    r.abs.truncation_warning = r.abs.end_flux > 1e-6 * peak_abs;

    // j0-weighted angle over the time-like part.
    CompensatedSum<double> num, den;
    for (std::size_t i = 0; i < nd; ++i) {
        if (tp.direct.x[i] < tp.R) continue;
        num.add(tp.direct.w[i] * sums.angle[i]);
        den.add(tp.direct.w[i] * sums.j0[i]);
    }
    r.alignment = den.value() > 0.0 ? num.value() / den.value() : 0.0;

    if (!tp.kq.x.empty()) {
        const double sliver = weighted(tp.sliver, sums.jn, tp.off_sliver);
        CompensatedSum<double> sub, cov;
        for (std::size_t i = 0; i < tp.kq.size(); ++i) {
            const double k = tp.kq.x[i];
            const double E = energy(k, m);
            const double f = sums.jn[tp.off_k + i];
            // dt = R m^2 / (E k^2) dk
            sub.add(tp.kq.w[i] * f * tp.R * m * m / (E * k * k));
            // Same integral with x = lambda k n, t = lambda E, lambda = R / k and the
            // unit-sphere measure: (m^2 / E) k lambda^3 dk dOmega.
            const double lam = tp.R / k;
            cov.add(tp.kq.w[i] * (f / (tp.R * tp.R)) * (m * m / E) * k * lam * lam * lam);
        }
        r.substituted = r.direct;
        r.substituted.value = early + sliver + sub.value();
        r.covariant = early + sliver + cov.value();
    }
    return r;
}

double k_top_of(const MomentumAmplitude& amp)
{
    if (!amp.has_profile()) throw Error(ErrorKind::profile_required, "detector integrals need an amplitude profile");
    return amp.profile->radial_support()[1];
}

}  // namespace

TimeIntegral crossing_direct(const ScatteringState& state, const SurfaceQuadrature& s, double t_max, int n_t,
                             const SpectralOptions& opt)
{
    if (!(t_max > s.R)) throw Error(ErrorKind::invalid_argument, "t_max must exceed the detector radius");
    DetectorOptions d;
    const TimePlan tp = make_plan(s.R, t_max, n_t, 0.0, 0.0, state.outgoing().m, d, false);
    const SpectralEvaluator ev = state.evaluator(s.points, t_max, opt);
    return integrate_plan(ev, s, tp, state.outgoing().m).direct;
}

TimeIntegral abs_flux_integral(const ScatteringState& state, const SurfaceQuadrature& s, double t_max, int n_t,
                               const SpectralOptions& opt)
{
    if (!(t_max > s.R)) throw Error(ErrorKind::invalid_argument, "t_max must exceed the detector radius");
    DetectorOptions d;
    const TimePlan tp = make_plan(s.R, t_max, n_t, 0.0, 0.0, state.outgoing().m, d, false);
    const SpectralEvaluator ev = state.evaluator(s.points, t_max, opt);
    return integrate_plan(ev, s, tp, state.outgoing().m).abs;
}

TimeIntegral crossing_substituted(const ScatteringState& state, const SurfaceQuadrature& s, double k_min,
                                  const DetectorOptions& opt)
{
    if (!(k_min > 0.0)) throw Error(ErrorKind::invalid_argument, "k_min must be > 0");
    const MomentumAmplitude& amp = state.outgoing();
    const double m = amp.m;
    const double t_max = default_t_max(s.R, k_min, m);
    const int n_t = opt.n_t > 0 ? opt.n_t : default_n_t(s.R, m);
    const TimePlan tp = make_plan(s.R, t_max, n_t, k_min, k_top_of(amp), m, opt, true);
    const SpectralEvaluator ev = state.evaluator(s.points, t_max, opt.spectral);
    return integrate_plan(ev, s, tp, m).substituted;
}

double tail_bound(const MomentumAmplitude& amp, const ConeSpec& cone, double k_min)
{
    if (!(k_min > 0.0)) return 0.0;
    if (!amp.has_profile()) throw Error(ErrorKind::profile_required, "tail bound needs an amplitude profile");
    SphericalSpec sp;
    sp.axis = cone.axis;
    sp.r_min = 0.0;
    sp.r_max = k_min;
    sp.radial_panels = 2;
    sp.radial_order = 16;
    sp.polar_order = 48;
    if (!cone.full_sphere()) sp.polar_split = std::cos(cone.half_angle);
    sp.n_phi = 48;
    return momentum_side(amp.resampled(MomentumGrid::spherical(sp)), cone);
}

bool FASReport::abs_disc_non_increasing() const
{
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.abs_disc);
    return non_increasing(v);
}

FASReport fas_sweep(const ScatteringState& state, const ConeSpec& cone, std::span<const double> R_list,
                    const DetectorOptions& opt)
{
    for (std::size_t i = 1; i < R_list.size(); ++i)
        if (!(R_list[i] > R_list[i - 1])) throw Error(ErrorKind::invalid_argument, "R_list must increase");
    const MomentumAmplitude& amp = state.outgoing();
    const double m = amp.m;
    FASReport rep;
    rep.cone = cone;
    rep.free = state.is_free();
    if (R_list.empty()) return rep;

    const double k_min = opt.k_min > 0.0 ? opt.k_min : default_k_min(amp);
    const double k_top = k_top_of(amp);
    const double ms = momentum_side_resolved(amp, cone);
    const double tail = tail_bound(amp, cone, k_min);

    for (double R : R_list) {
        const auto start = std::chrono::steady_clock::now();
        FASRow row;
        row.R = R;
        row.k_min = k_min;
        row.t_max = default_t_max(R, k_min, m);
        row.n_t = opt.n_t > 0 ? opt.n_t : default_n_t(R, m);
        row.momentum_side = ms;
        row.tail_bound = tail;

        const SurfaceQuadrature sc = sphere_quadrature(R, cone, opt.cone_theta, opt.n_phi);
        const TimePlan tp = make_plan(R, row.t_max, row.n_t, k_min, k_top, m, opt, true);
        {
            const SpectralEvaluator ev = state.evaluator(sc.points, row.t_max, opt.spectral);
            row.radial_nodes = ev.radial_size();
            const PlanResult r = integrate_plan(ev, sc, tp, m);
            row.crossing_direct = r.direct.value;
            row.crossing_substituted = r.substituted.value;
            row.abs_flux = r.abs.value;
            row.spacelike_part = r.direct.spacelike;
            row.covariant_lhs = r.covariant;
            row.truncation_warning = r.direct.truncation_warning;
        }
        row.surface_points = sc.size();
        row.signed_disc = row.crossing_direct - ms;
        row.abs_disc = std::abs(row.signed_disc);

        if (opt.full_sphere) {
            const SurfaceQuadrature sf = sphere_quadrature(R, ConeSpec(cone.axis, pi), opt.sphere_theta, opt.n_phi);
            const TimePlan tf = make_plan(R, row.t_max, row.n_t, 0.0, 0.0, m, opt, false);
            const SpectralEvaluator ev = state.evaluator(sf.points, row.t_max, opt.spectral);
            const PlanResult r = integrate_plan(ev, sf, tf, m);
            row.full_crossing = r.direct.value;
            row.full_abs = r.abs.value;
            row.full_spacelike = r.direct.spacelike;
            row.alignment = r.alignment;
        }
        if (row.truncation_warning) {
            std::ostringstream os;
            os << "R=" << R << ": flux at t_max is above 1e-6 of its peak; the discarded tail is bounded by "
               << tail;
            rep.warnings.push_back(os.str());
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rep.rows.push_back(row);
    }
    return rep;
}

void write_fas_csv(const FASReport& rep, const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error(ErrorKind::io_error, "cannot write " + path);
    std::fprintf(f, "R,crossing_direct,crossing_substituted,abs_flux,spacelike_part,momentum_side,signed_disc,abs_disc,"
                    "tail_bound\n");
    for (const auto& r : rep.rows)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.R, r.crossing_direct,
                     r.crossing_substituted, r.abs_flux, r.spacelike_part, r.momentum_side, r.signed_disc, r.abs_disc,
                     r.tail_bound);
    if (std::fclose(f) != 0) throw Error(ErrorKind::io_error, "cannot write " + path);
}

CovariantReport covariant_check(const ScatteringState& state, const ConeSpec& cone, std::span<const double> lambda_list,
                                const DetectorOptions& opt)
{
    if (!state.is_free()) throw Error(ErrorKind::invalid_argument, "covariant check is defined for the free case");
    const MomentumAmplitude& amp = state.outgoing();
    CovariantReport rep;
    rep.momentum_side = momentum_side(amp, cone);
    rep.covariant_momentum_side = covariant_momentum_side(amp, cone);
    rep.rhs_diff = std::abs(rep.momentum_side - rep.covariant_momentum_side);
    const double k_min = opt.k_min > 0.0 ? opt.k_min : default_k_min(amp);
    for (double lam : lambda_list) {
        const SurfaceQuadrature sc = sphere_quadrature(lam, cone, opt.cone_theta, opt.n_phi);
        const double t_max = default_t_max(lam, k_min, amp.m);
        const int n_t = opt.n_t > 0 ? opt.n_t : default_n_t(lam, amp.m);
        const TimePlan tp = make_plan(lam, t_max, n_t, k_min, k_top_of(amp), amp.m, opt, true);
        const SpectralEvaluator ev = state.evaluator(sc.points, t_max, opt.spectral);
        const PlanResult r = integrate_plan(ev, sc, tp, amp.m);
        CovariantRow row{lam, r.covariant, r.substituted.value};
        rep.rows.push_back(row);
        const double scale = std::max(std::abs(row.crossing), 1e-300);
        rep.lhs_max_rel = std::max(rep.lhs_max_rel, std::abs(row.lhs - row.crossing) / scale);
    }
    return rep;
}

}  // namespace dfl
