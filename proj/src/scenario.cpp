// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <random>
#include <sstream>

#include "dfl/eigen_bank.hpp"
#include "dfl/parallel.hpp"
#include "dfl/propagator.hpp"
#include "dfl/scattering.hpp"
#include "dfl/statphase.hpp"

namespace dfl {

namespace {

using clock_type = std::chrono::steady_clock;

class Stopwatch {
  public:
    explicit Stopwatch(RunReport& rep, std::string name) : rep_(rep), name_(std::move(name)), start_(clock_type::now()) {}
    ~Stopwatch() { rep_.timings.emplace_back(name_, std::chrono::duration<double>(clock_type::now() - start_).count()); }

  private:
    RunReport& rep_;
    std::string name_;
    clock_type::time_point start_;
};

std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

ConeSpec cone_of(const ScenarioConfig& c) { return ConeSpec(normalized(c.cone_axis), c.cone_half_angle); }

void fas_checks(RunReport& rep, const FASReport& fas, double rel_bound, bool spacelike_check, bool full_check,
                double subst_rel)
{
    const auto& rows = fas.rows;
    double worst_ratio = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        worst_ratio = std::max(worst_ratio, rows[i].abs_disc / std::max(rows[i - 1].abs_disc, 1e-300));
    rep.check("abs_disc_non_increasing", fas.abs_disc_non_increasing(), worst_ratio,
              "abs_disc(R_i) <= abs_disc(R_{i-1}); value is the largest ratio");
    const FASRow& last = rows.back();
    const double rel = last.abs_disc / last.momentum_side;
    rep.check("abs_disc_rel_at_max_R", rel < rel_bound, rel, "< " + num(rel_bound),
              "R = " + num(last.R) + ", momentum_side = " + num(last.momentum_side));
    double subst = 0.0;
    for (const auto& r : rows)
        subst = std::max(subst, std::abs(r.crossing_substituted - r.crossing_direct) / std::abs(r.crossing_direct));
    rep.check("substitution_identity", subst <= subst_rel, subst, "<= " + num(subst_rel));
    if (spacelike_check) {
        const double f = std::abs(last.spacelike_part) / std::abs(last.crossing_direct);
        rep.check("spacelike_fraction_at_max_R", f < 0.01, f, "< 0.01");
    }
    if (full_check) {
        double lo = 1e300, hi = -1e300;
        for (const auto& r : rows) {
            lo = std::min(lo, r.full_crossing);
            hi = std::max(hi, r.full_crossing);
        }
        const bool ok = lo >= 0.97 && hi <= 1.01;
        rep.check("full_sphere_crossing", ok, ok ? hi : (lo < 0.97 ? lo : hi), "in [0.97, 1.01] for every R",
                  "min " + num(lo) + ", max " + num(hi));
    }
    for (const auto& w : fas.warnings) rep.warnings.push_back(w);
}

void run_free_fas(const ScenarioConfig& c, const std::string& dir, RunReport& rep)
{
    const auto amp = make_packet(c);
    const FreeState state(amp);
    const ConeSpec cone = cone_of(c);
    FASReport fas;
    {
        Stopwatch sw(rep, "fas_sweep");
        fas = fas_sweep(state, cone, c.R_list, detector_options(c));
    }
    write_fas_csv(fas, dir + "/fas_convergence.csv");
    rep.files.push_back("fas_convergence.csv");
    fas_checks(rep, fas, c.fas_rel_free, true, c.full_sphere, c.subst_rel);
    double cov = 0.0;
    for (const auto& r : fas.rows)
        cov = std::max(cov, std::abs(r.covariant_lhs - r.crossing_substituted) / std::abs(r.crossing_substituted));
    rep.check("covariant_lhs", cov <= 1e-10, cov, "<= 1e-10 relative to crossing_substituted");
    const double ms = momentum_side(*amp, cone), cms = covariant_momentum_side(*amp, cone);
    rep.check("covariant_momentum_side", std::abs(ms - cms) <= 1e-12, std::abs(ms - cms), "<= 1e-12");
}

std::shared_ptr<const EigenBank> obtain_bank(const ScenarioConfig& c, const Potential& pot, const MomentumGrid& kgrid,
                                             const SpatialGrid& grid, RunReport& rep)
{
    if (!c.bank_dir.empty() && std::filesystem::exists(std::filesystem::path(c.bank_dir) / "manifest.txt")) {
        Stopwatch sw(rep, "bank_load");
        auto bank = std::make_shared<EigenBank>(load_bank(c.bank_dir));
        check_bank(*bank, kgrid, grid, c.m);
        if (bank->potential != pot.description)
            throw Error(ErrorKind::bank_mismatch, "bank in " + c.bank_dir + " was built for '" + bank->potential + "'");
        return bank;
    }
    LseOptions lo;
    lo.tol = c.lse_tol;
    lo.max_iter = c.lse_max_iter;
    std::shared_ptr<EigenBank> bank;
    {
        Stopwatch sw(rep, "bank_build");
        bank = std::make_shared<EigenBank>(build_bank(pot, kgrid, grid, c.m, lo));
    }
    if (!c.bank_dir.empty()) {
        Stopwatch sw(rep, "bank_save");
        save_bank(*bank, c.bank_dir);
    }
    return bank;
}

void run_potential_fas(const ScenarioConfig& c, const std::string& dir, RunReport& rep)
{
    const auto amp = make_packet(c);
    const Potential pot = Potential::gaussian(c.coupling, c.width);
    const SpatialGrid box = SpatialGrid::cube(c.box_L, c.box_N);
    const double outside = outside_mass_fraction(pot, box);
    rep.check("potential_mass_in_box", outside < 1e-8, outside, "< 1e-8 of the L1 mass outside the box");
    const SpatialGrid grid = support_subgrid(pot, box);
    const auto bank = obtain_bank(c, pot, bank_grid_for(*amp, c.bank_n), grid, rep);

    bool converged = true, monotone = true;
    for (const auto& f : bank->fields) {
        converged = converged && f.record.converged;
        monotone = monotone && f.record.monotone();
    }
    rep.check("bank_converged", converged, bank->max_last_delta(), "every field below lse.tol",
              "max iterations " + std::to_string(bank->max_iterations()));
    rep.check("born_deltas_monotone", monotone, static_cast<double>(bank->max_iterations()), "deltas never increase");

    PotentialStateOptions po;
    po.cheb_nodes = c.state_cheb;
    po.polar_order = c.state_polar;
    po.n_phi = c.state_n_phi;
    std::unique_ptr<PotentialState> state;
    {
        Stopwatch sw(rep, "state_setup");
        state = std::make_unique<PotentialState>(amp, pot, bank, po);
    }
    rep.warnings.push_back("the scattered wave at the detector is the Nystrom sum over the " + std::to_string(grid.N) +
                           "^3 source grid; no envelope extrapolation is used");
    FASReport fas;
    {
        Stopwatch sw(rep, "fas_sweep");
        fas = fas_sweep(*state, cone_of(c), c.R_list, detector_options(c));
    }
    write_fas_csv(fas, dir + "/fas_convergence.csv");
    rep.files.push_back("fas_convergence.csv");
    fas_checks(rep, fas, c.fas_rel_potential, false, false, c.subst_rel);
}

void run_cones(const ScenarioConfig& c, const std::string& dir, RunReport& rep)
{
    const auto amp = make_packet(c);
    ConesReport cr;
    {
        Stopwatch sw(rep, "cones_scaling");
        cr = cones_scaling(*amp, c.cones_k, c.lambda_list, spectral_options(c));
    }
    write_cones_csv(cr, dir + "/cones_scaling.csv");
    rep.files.push_back("cones_scaling.csv");
    rep.check("cones_err_slope", cr.err_slope <= c.slope_max, cr.err_slope, "<= " + num(c.slope_max));
    rep.check("cones_leading_slope", std::abs(cr.leading_slope + 1.5) <= 0.02, cr.leading_slope, "-1.5 +- 0.02");
    const double fe = cr.rows.back().flux_rel_err;
    rep.check("flux_asymptotic_rel_err", fe < 0.05, fe, "< 0.05 at the largest lambda");
}

void run_statphase(const ScenarioConfig& c, const std::string& dir, RunReport& rep)
{
    PhaseParams base;
    base.m = c.m;
    base.y = c.y;
    const auto ks = k_stationary(base);
    if (!ks) throw Error(ErrorKind::no_stationary_point, "statphase.y has no stationary point");
    ChiSpec chi;
    chi.center = *ks;
    chi.radius = c.chi_radius;
    chi.sigma = c.chi_sigma;
    rep.check("k_stationary_gradient", norm(phase_gradient(base, *ks)) <= 1e-10, norm(phase_gradient(base, *ks)),
              "<= 1e-10");
    ScalingReport sr;
    {
        Stopwatch sw(rep, "statphase");
        sr = error_scaling(base, c.mu_list, chi);
    }
    write_statphase_csv(sr, dir + "/statphase.csv");
    rep.files.push_back("statphase.csv");
    {
        Stopwatch sw(rep, "grid_refinement");
        PhaseParams p = base;
        p.mu = c.mu_list.back();
        const Spinor4 a = statphase_compare(p, chi, 1.0).brute, b = statphase_compare(p, chi, 2.0).brute;
        rep.check("brute_grid_converged", norm_s(a - b) < 1e-8, norm_s(a - b), "< 1e-8 when the grid is refined 2x");
    }
    rep.check("statphase_err_slope", sr.slope <= c.slope_max && sr.slope >= -2.6, sr.slope,
              "in [-2.6, " + num(c.slope_max) + "]");
    rep.check("statphase_leading_slope", std::abs(sr.leading_slope + 1.5) <= 0.02, sr.leading_slope, "-1.5 +- 0.02");

    PhaseParams far = base;
    far.y = c.y_nostat;
    ChiSpec chi2 = chi;
    chi2.center = 0.5 * c.y_nostat;
    ScalingReport nr;
    {
        Stopwatch sw(rep, "statphase_nostat");
        nr = error_scaling(far, c.mu_list, chi2);
    }
    write_statphase_csv(nr, dir + "/statphase_nostat.csv");
    rep.files.push_back("statphase_nostat.csv");
    rep.check("nostat_brute_slope", nr.brute_slope <= c.slope_max, nr.brute_slope, "<= " + num(c.slope_max));
}

void run_continuity(const ScenarioConfig& c, const std::string& dir, RunReport& rep)
{
    (void)dir;
    const auto amp = make_packet(c);
    const WaveEvaluator wave(*amp);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> ux(-2.0, 5.0), uy(-3.0, 3.0), ut(0.0, 3.0);
    std::vector<SpacetimePoint> pts(static_cast<std::size_t>(c.continuity_points));
    for (auto& p : pts) {
        p.x = Vec3{ux(rng), uy(rng), uy(rng)};
        p.t = ut(rng);
    }
    double plus_h = 0.0, plus_h2 = 0.0, minus_h = 0.0;
    {
        Stopwatch sw(rep, "continuity");
        for (const auto& p : pts) {
            const ContinuityResidual a = continuity_residual(wave, p, c.continuity_h);
            const ContinuityResidual b = continuity_residual(wave, p, 0.5 * c.continuity_h);
            plus_h = std::max(plus_h, a.plus);
            minus_h = std::max(minus_h, a.minus);
            plus_h2 = std::max(plus_h2, b.plus);
        }
    }
    const double ratio = plus_h / plus_h2;
    rep.check("continuity_h2_ratio", ratio >= 3.5 && ratio <= 4.5, ratio, "in [3.5, 4.5] when h halves");
    rep.check("continuity_residual", plus_h < 1e-4, plus_h, "< 1e-4 at h = " + num(c.continuity_h));
    rep.check("continuity_sign", plus_h < 1e-3 * minus_h, plus_h / minus_h,
              "d_t j0 + div j vanishes, d_t j0 - div j does not",
              "max |d_t j0 - div j| = " + num(minus_h));
}

}  // namespace

std::shared_ptr<MomentumAmplitude> make_packet(const ScenarioConfig& c)
{
    const MomentumGrid grid = default_packet_grid(c.k0, c.sigma, c.grid_n);
    return std::make_shared<MomentumAmplitude>(gaussian_packet(grid, c.k0, c.sigma, c.m, c.spin_mix));
}

SpectralOptions spectral_options(const ScenarioConfig& c)
{
    SpectralOptions s;
    s.cheb_nodes = c.cheb_nodes;
    s.legendre_order = c.legendre_order;
    s.polar_nodes = c.polar_nodes;
    s.n_phi = c.spectral_n_phi;
    return s;
}

DetectorOptions detector_options(const ScenarioConfig& c)
{
    DetectorOptions d;
    d.cone_theta = c.cone_theta;
    d.sphere_theta = c.sphere_theta;
    d.n_phi = c.n_phi;
    d.k_min = c.k_min;
    d.n_t = c.n_t;
    d.full_sphere = c.full_sphere;
    d.spectral = spectral_options(c);
    return d;
}

RunReport run_scenario(const ScenarioConfig& config, const std::string& out_dir)
{
    validate(config);
    RunReport rep;
    rep.scenario = config.scenario;
    rep.config = echo_config(config);
    rep.threads = config.threads;
    set_threads(config.threads);
    std::filesystem::create_directories(out_dir);
    const auto start = clock_type::now();
    try {
        if (config.scenario == "free-fas") run_free_fas(config, out_dir, rep);
        else if (config.scenario == "potential-fas") run_potential_fas(config, out_dir, rep);
        else if (config.scenario == "cones-scaling") run_cones(config, out_dir, rep);
        else if (config.scenario == "statphase-bench") run_statphase(config, out_dir, rep);
        else run_continuity(config, out_dir, rep);
    } catch (const Error& e) {
        rep.error = std::string(e.what());
    }
    rep.timings.emplace_back("total", std::chrono::duration<double>(clock_type::now() - start).count());
    rep.files.push_back("report.json");
    write_report_json(rep, out_dir + "/report.json");
    return rep;
}

}  // namespace dfl
