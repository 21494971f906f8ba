// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/statphase.hpp"

#include <cstdio>
#include <sstream>

#include "dfl/parallel.hpp"
#include "dfl/quadrature.hpp"

namespace dfl {

void validate(const PhaseParams& p)
{
    if (p.a < 0.0) throw Error(ErrorKind::invalid_argument, "phase parameter a must be >= 0");
    if (!(p.mu > 0.0)) throw Error(ErrorKind::invalid_argument, "phase parameter mu must be > 0");
    if (!(p.m > 0.0)) throw Error(ErrorKind::invalid_argument, "phase parameter m must be > 0");
}

double phase_g(const PhaseParams& p, const Vec3& k) { return energy(k, p.m) + p.a * norm(k) - dot(p.y, k); }

Vec3 phase_gradient(const PhaseParams& p, const Vec3& k)
{
    const double kn = norm(k);
    Vec3 g = (1.0 / energy(k, p.m)) * k - p.y;
    if (kn > 0.0) g += (p.a / kn) * k;
    return g;
}

std::optional<Vec3> k_stationary(const PhaseParams& p)
{
    validate(p);
    const double yn = norm(p.y);
    const double r = yn - p.a;
    if (r < 0.0 || r >= 1.0) return std::nullopt;
    if (r == 0.0) return Vec3{};
    return (p.m * r / std::sqrt(1.0 - r * r) / yn) * p.y;
}

SpinorSamples sample(const MomentumGrid& grid, const SpinorFunction& chi)
{
    SpinorSamples s{grid, std::vector<Spinor4>(grid.size())};
    parallel_for(grid.size(), [&](std::size_t i) { s.values[i] = chi(grid.nodes[i]); });
    return s;
}

double max_phase_step(const PhaseParams& p, const MomentumGrid& grid)
{
    std::vector<double> g(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { g[i] = phase_g(p, grid.nodes[i]); });
    double step = 0.0;
    grid.for_each_adjacent([&](std::size_t a, std::size_t b) { step = std::max(step, std::abs(g[a] - g[b])); });
    return p.mu * step;
}

namespace {

void require_resolved(const PhaseParams& p, const MomentumGrid& grid)
{
    if (grid.size() <= 1) return;
    if (!grid.structured())
        throw Error(ErrorKind::resolution, "phase resolution can only be certified on a structured grid");
    const double step = max_phase_step(p, grid);
    if (!(step < 0.5 * pi)) {
        std::ostringstream os;
        os << "adjacent-node phase step " << step << " >= pi/2 at mu = " << p.mu;
        throw Error(ErrorKind::resolution, os.str());
    }
}

}  // namespace

Spinor4 oscillatory_bruteforce(const PhaseParams& p, const SpinorSamples& chi)
{
    validate(p);
    require_resolved(p, chi.grid);
    return blocked_sum<Spinor4>(chi.grid.size(), [&](std::size_t i) {
        const double ph = -p.mu * phase_g(p, chi.grid.nodes[i]);
        return cplx(chi.grid.weights[i] * std::cos(ph), chi.grid.weights[i] * std::sin(ph)) * chi.values[i];
    });
}

Spinor4 oscillatory_bruteforce_reference(const PhaseParams& p, const SpinorSamples& chi)
{
    validate(p);
    require_resolved(p, chi.grid);
    std::array<CompensatedSum<cplx>, 4> acc;
    for (std::size_t r = chi.grid.size(); r-- > 0;) {
        const cplx e = chi.grid.weights[r] * std::polar(1.0, -p.mu * phase_g(p, chi.grid.nodes[r]));
        for (int c = 0; c < 4; ++c) acc[c].add(e * chi.values[r][c]);
    }
    Spinor4 out;
    for (int c = 0; c < 4; ++c) out[c] = acc[c].value();
    return out;
}

cplx c1_constant(const PhaseParams& p, const Vec3& k_stat)
{
    // (-2 pi i)^{3/2} = (2 pi)^{3/2} e^{-3 pi i / 4} on the principal branch.
    const cplx branch = std::pow(2.0 * pi, 1.5) * std::polar(1.0, -0.75 * pi);
    const double e = energy(k_stat, p.m);
    return branch * std::polar(1.0, -p.mu * phase_g(p, k_stat)) * std::pow(e, 2.5) / p.m;
}

Spinor4 leading_term(const PhaseParams& p, const SpinorFunction& chi)
{
    validate(p);
    if (p.a != 0.0) throw Error(ErrorKind::unsupported_a, "explicit leading term is available for a = 0 only");
    const auto ks = k_stationary(p);
    if (!ks) throw Error(ErrorKind::no_stationary_point, "phase has no stationary point");
    return (c1_constant(p, *ks) * std::pow(p.mu, -1.5)) * chi(*ks);
}

MomentumGrid statphase_grid(const PhaseParams& p, const Vec3& center, double radius, double oversample)
{
    validate(p);
    // k -> k/E is 1/m-Lipschitz, so on the ball |grad g| <= |c/E_c - y| + a + radius/m.
    const double ec = energy(center, p.m);
    const double gmax = std::min(1.0 + p.a + norm(p.y), norm((1.0 / ec) * center - p.y) + p.a + radius / p.m);
    const double total = std::max(1.0, p.mu * gmax * radius * oversample);
    SphericalSpec s;
    s.center = center;
    s.axis = norm(p.y) > 0.0 ? p.y : Vec3{0.0, 0.0, 1.0};
    s.r_min = 0.0;
    s.r_max = radius;
    s.radial_order = 16;
    s.radial_panels = std::max(2, static_cast<int>(std::ceil(total / 8.0)));
    // An n-point polar rule leaves theta gaps of about pi / n.
    s.polar_order = std::max(24, static_cast<int>(std::ceil(2.5 * total)));
    const Vec3 ax = normalized(s.axis);
    const bool on_axis = norm(center - dot(center, ax) * ax) <= 1e-14 * (1.0 + norm(center));
    s.n_phi = on_axis ? 2 : std::max(16, static_cast<int>(std::ceil(2.5 * total)));
    return MomentumGrid::spherical(s);
}

Spinor4 ChiSpec::operator()(const Vec3& k) const
{
    const double r = norm(k - center);
    if (r >= radius) return Spinor4{};
    const double s = r / radius;
    const double b = 1.0 - s * s;
    double env = b * b * b;
    if (sigma > 0.0) env *= std::exp(-r * r / (4.0 * sigma * sigma));
    return cplx(env) * spinor;
}

StatPhaseResult statphase_compare(const PhaseParams& p, const ChiSpec& chi, double oversample)
{
    StatPhaseResult res;
    res.k_stat = k_stationary(p);
    const MomentumGrid grid = statphase_grid(p, chi.center, chi.radius, oversample);
    const SpinorSamples s = sample(grid, [&](const Vec3& k) { return chi(k); });
    res.brute = oscillatory_bruteforce(p, s);
    if (res.k_stat && p.a == 0.0) {
        res.leading = leading_term(p, [&](const Vec3& k) { return chi(k); });
        res.err = norm_s(res.brute - res.leading);
    } else {
        res.err = norm_s(res.brute);
    }
    return res;
}

ScalingReport error_scaling(const PhaseParams& base, std::span<const double> mu_list, const ChiSpec& chi)
{
    if (mu_list.size() < 2) throw Error(ErrorKind::invalid_argument, "error_scaling needs >= 2 values of mu");
    ScalingReport rep;
    rep.has_stationary_point = k_stationary(base).has_value() && base.a == 0.0;
    std::vector<double> mus, errs, leads, brutes;
    for (double mu : mu_list) {
        PhaseParams p = base;
        p.mu = mu;
        const StatPhaseResult r = statphase_compare(p, chi);
        StatPhaseRow row{mu, r.err, norm_s(r.leading), norm_s(r.brute)};
        rep.rows.push_back(row);
        mus.push_back(mu);
        errs.push_back(row.err_norm);
        leads.push_back(row.leading_norm);
        brutes.push_back(row.brute_norm);
    }
    rep.slope = loglog_slope(mus, errs);
    rep.brute_slope = loglog_slope(mus, brutes);
    rep.leading_slope = rep.has_stationary_point ? loglog_slope(mus, leads) : 0.0;
    return rep;
}

void write_statphase_csv(const ScalingReport& rep, const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error(ErrorKind::io_error, "cannot write " + path);
    std::fprintf(f, "mu,err_norm,leading_norm,brute_norm\n");
    for (const auto& r : rep.rows)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", r.mu, r.err_norm, r.leading_norm, r.brute_norm);
    if (std::fclose(f) != 0) throw Error(ErrorKind::io_error, "cannot write " + path);
}

Spinor4 cones_asymptotic(const MomentumAmplitude& amp, double lambda, const Vec3& k)
{
    if (!(lambda > 0.0)) throw Error(ErrorKind::invalid_argument, "lambda must be > 0");
    const double m = amp.m;
    const cplx factor = std::polar(1.0, -lambda * m * m) * std::pow(cplx(0.0, lambda), -1.5)
                        * std::sqrt(dot(k, k) / (m * m) + 1.0);
    return factor * amp.spinor_at(k);
}

Vec3 flux_asymptotic(const MomentumAmplitude& amp, const Vec3& k)
{
    const double m = amp.m;
    return (norm_s2(amp.spinor_at(k)) * energy(k, m) / (m * m)) * k;
}

ConesReport cones_scaling(const MomentumAmplitude& amp, const Vec3& k, std::span<const double> lambda_list,
                          const SpectralOptions& opt)
{
    if (lambda_list.size() < 2) throw Error(ErrorKind::invalid_argument, "cones scaling needs at least two lambdas");
    ConesReport rep;
    rep.k = k;
    const double E = energy(k, amp.m);
    std::vector<Vec3> pts;
    for (double lam : lambda_list) {
        if (!(lam > 0.0)) throw Error(ErrorKind::invalid_argument, "lambda must be > 0");
        pts.push_back(lam * k);
    }
    const SpectralEvaluator ev(amp, pts, lambda_list.back() * E, opt);
    const Vec3 jinf = flux_asymptotic(amp, k);
    std::vector<double> lam, err, lead;
    for (std::size_t i = 0; i < lambda_list.size(); ++i) {
        const double l = lambda_list[i];
        const Spinor4 psi = ev.value(i, l * E);
        const Spinor4 lt = cones_asymptotic(amp, l, k);
        ConesRow r;
        r.lambda = l;
        r.wave_norm = norm_s(psi);
        r.leading_norm = norm_s(lt);
        r.err_norm = norm_s(psi - lt);
        const FluxVector j = flux(psi);
        r.flux_rel_err = norm(l * l * l * j.j - jinf) / std::max(norm(jinf), 1e-300);
        rep.rows.push_back(r);
        lam.push_back(l);
        err.push_back(r.err_norm);
        lead.push_back(r.leading_norm);
    }
    rep.err_slope = loglog_slope(lam, err);
    rep.leading_slope = loglog_slope(lam, lead);
    return rep;
}

void write_cones_csv(const ConesReport& rep, const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error(ErrorKind::io_error, "cannot write " + path);
    std::fprintf(f, "lambda,wave_norm,leading_norm,err_norm,flux_rel_err\n");
    for (const auto& r : rep.rows)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.lambda, r.wave_norm, r.leading_norm, r.err_norm,
                     r.flux_rel_err);
    if (std::fclose(f) != 0) throw Error(ErrorKind::io_error, "cannot write " + path);
}

}  // namespace dfl
