// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only when
//! every criterion passes. Usage: acceptance [out_dir] [criterion ...]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dfl/config.hpp"
#include "dfl/eigen_bank.hpp"
#include "dfl/lippmann.hpp"
#include "dfl/scenario.hpp"
#include "oracles.hpp"

using namespace dfl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
        passed = passed && ok;
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

fs::path g_out;
std::map<std::string, RunReport> g_runs;

//! Runs a scenario with the given config overrides once and caches the report.
const RunReport& scenario_run(const std::string& tag, const std::string& text)
{
    auto it = g_runs.find(tag);
    if (it != g_runs.end()) return it->second;
    const ScenarioConfig c = parse_config(text);
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep = run_scenario(c, (g_out / tag).string());
    rep.timings.emplace_back("acceptance_wall", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return g_runs.emplace(tag, std::move(rep)).first->second;
}

double timing(const RunReport& r, const std::string& name)
{
    for (const auto& [k, v] : r.timings)
        if (k == name) return v;
    return 0.0;
}

const Assertion* find(const RunReport& r, const std::string& name)
{
    for (const auto& a : r.assertions)
        if (a.name == name) return &a;
    return nullptr;
}

void require_assertion(Outcome& o, const RunReport& r, const std::string& name)
{
    if (!r.error.empty()) {
        o.require(false, r.scenario + " error: " + r.error);
        return;
    }
    const Assertion* a = find(r, name);
    if (!a) {
        o.require(false, name + " missing");
        return;
    }
    o.require(a->passed, name + "=" + fmt("%.6g", a->value) + " (" + a->rule + ")");
}

void require_runtime(Outcome& o, double seconds, double budget)
{
    o.require(seconds < budget, "runtime " + fmt("%.1f", seconds) + " s < " + fmt("%.0f", budget) + " s");
}

//---------------------------------------------------------------------------//

Outcome c1_algebra()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto& d = dirac_matrices();
    double ac = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j)
            ac = std::max(ac, max_abs(d.alpha(i) * d.alpha(j) + d.alpha(j) * d.alpha(i) -
                                      (i == j ? cplx(2.0) : cplx(0.0)) * Mat4::identity()));
        ac = std::max(ac, max_abs(d.alpha(i) * d.beta + d.beta * d.alpha(i)));
    }
    ac = std::max(ac, max_abs(d.beta * d.beta - Mat4::identity()));
    oracle::Gen g(1001);
    double ortho = 0.0, eig = 0.0, fl = 0.0;
    const int n = 2000;
    for (int t = 0; t < n; ++t) {
        const Vec3 k = g.uniform(0.0, 10.0) * g.direction();
        const double m = g.uniform(0.1, 5.0);
        const SpinorBasisPair b = positive_spinors(k, m);
        ortho = std::max({ortho, std::abs(inner(b[0], b[0]) - 1.0), std::abs(inner(b[1], b[1]) - 1.0),
                          std::abs(inner(b[0], b[1]))});
        const Spinor4 s = g.complex(1.0) * b[0] + g.complex(1.0) * b[1];
        eig = std::max(eig, norm_s(apply_free_hamiltonian(k, m, s) - cplx(b.E) * s) / (b.E * norm_s(s)));
        const double ss = norm_s2(s);
        for (int l = 0; l < 3; ++l)
            fl = std::max(fl, std::abs(std::real(inner(s, apply_alpha(l, s))) - k[l] / b.E * ss) / ss);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(ac <= 1e-12, "anticommutators " + fmt("%.2g", ac));
    o.require(ortho <= 1e-12, "orthonormality " + fmt("%.2g", ortho) + " over " + std::to_string(n) + " momenta");
    o.require(eig <= 1e-12, "eigenvector " + fmt("%.2g", eig));
    o.require(fl <= 1e-12, "flux identity " + fmt("%.2g", fl));
    require_runtime(o, secs, 5.0);
    return o;
}

Outcome c2_continuity()
{
    Outcome o;
    const RunReport& r = scenario_run("continuity", "run.scenario = continuity-suite\n");
    require_assertion(o, r, "continuity_h2_ratio");
    require_assertion(o, r, "continuity_residual");
    require_runtime(o, timing(r, "acceptance_wall"), 60.0);
    return o;
}

Outcome c3_cones()
{
    Outcome o;
    const RunReport& r = scenario_run("cones", "run.scenario = cones-scaling\n");
    require_assertion(o, r, "cones_err_slope");
    require_assertion(o, r, "cones_leading_slope");
    require_runtime(o, timing(r, "acceptance_wall"), 300.0);
    return o;
}

Outcome c4_statphase()
{
    Outcome o;
    const RunReport& r = scenario_run("statphase", "run.scenario = statphase-bench\n");
    if (const Assertion* a = find(r, "statphase_err_slope"))
        o.require(a->value <= -1.7, "error slope " + fmt("%.4f", a->value) + " <= -1.7");
    else
        o.require(false, "statphase_err_slope missing" + (r.error.empty() ? "" : ": " + r.error));
    require_assertion(o, r, "nostat_brute_slope");
    require_assertion(o, r, "k_stationary_gradient");
    require_runtime(o, timing(r, "acceptance_wall"), 300.0);
    return o;
}

Outcome c5_free_fas()
{
    Outcome o;
    const RunReport& r = scenario_run("free-fas", "run.scenario = free-fas\n");
    require_assertion(o, r, "abs_disc_non_increasing");
    require_assertion(o, r, "abs_disc_rel_at_max_R");
    require_assertion(o, r, "full_sphere_crossing");
    require_assertion(o, r, "spacelike_fraction_at_max_R");
    require_runtime(o, timing(r, "acceptance_wall"), 1200.0);
    return o;
}

Outcome c6_substitution()
{
    Outcome o;
    const RunReport& r = scenario_run("free-fas", "run.scenario = free-fas\n");
    require_assertion(o, r, "substitution_identity");
    require_runtime(o, timing(r, "acceptance_wall"), 600.0);
    return o;
}

Outcome c7_covariant()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    oracle::Gen g(1007);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const MomentumAmplitude amp = oracle::random_packet(g, 24);
        const ConeSpec cone(g.direction(), g.uniform(0.05, pi));
        worst = std::max(worst, std::abs(covariant_momentum_side(amp, cone) - momentum_side(amp, cone)));
    }
    o.require(worst <= 1e-12, "max |covariant - momentum_side| " + fmt("%.2g", worst) + " over 20 amplitudes/cones");
    require_runtime(o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
    return o;
}

Outcome c8_green()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    oracle::Gen g(1008);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double k = g.uniform(0.1, 4.0), m = g.uniform(0.5, 2.0);
        const Vec3 x = g.uniform(0.05, 10.0) * g.direction();
        const Mat4 b = oracle::green_from_derivatives(k, x, m);
        worst = std::max(worst, max_abs(green_kernel(k, x, m) - b) / max_abs(b));
    }
    o.require(worst <= 1e-12, "derivative construction " + fmt("%.2g", worst) + " at 100 points");
    double lo = 1e300, hi = 0.0;
    for (int t = 0; t < 20; ++t) {
        const double k = g.uniform(0.3, 3.0);
        const Vec3 x = g.uniform(0.5, 4.0) * g.direction();
        const double r = oracle::dirac_residual_fd(k, 1.0, x, 1e-2) / oracle::dirac_residual_fd(k, 1.0, x, 5e-3);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    o.require(lo >= 3.5 && hi <= 4.5, "(E-H0)G residual ratio per halving in [" + fmt("%.3f", lo) + ", " +
                                           fmt("%.3f", hi) + "]");
    require_runtime(o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 30.0);
    return o;
}

Outcome c9_lippmann()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const SpatialGrid grid = SpatialGrid::cube(8.0, 32);
    const Potential pot = Potential::gaussian(0.05, 1.0);
    oracle::Gen g(1009);
    std::vector<Vec3> ks{{2, 0, 0}};
    while (ks.size() < 12) ks.push_back(g.uniform(1.0, 3.0) * g.direction());
    const MomentumGrid kg = MomentumGrid::from_nodes(ks, std::vector<double>(ks.size(), 1.0));
    const EigenBank bank = build_bank(pot, kg, grid, 1.0);
    bool conv = true, mono = true, decay = true, holder = true;
    double worst_res = 0.0, worst_decay = 0.0, worst_holder = 0.0;
    for (const auto& f : bank.fields) {
        conv = conv && f.record.converged;
        mono = mono && f.record.monotone();
        worst_res = std::max(worst_res, eigen_residual(f, pot) / free_residual_floor(f.k, f.s, f.m, grid));
        const DecayCertificate dc = zeta_decay_certificate(f);
        decay = decay && dc.passed;
        worst_decay = std::max(worst_decay, dc.outer_max / dc.inner_max);
        const HolderReport hr = holder_check(f);
        holder = holder && hr.bounded;
        for (double q : hr.max_quotient) worst_holder = std::max(worst_holder, q / hr.bound);
    }
    o.require(conv && mono, "24 fields converged with monotone deltas (max " +
                                std::to_string(bank.max_iterations()) + " iterations)");
    o.require(worst_res <= 10.0, "eigen_residual / free floor " + fmt("%.3f", worst_res) + " <= 10");
    o.require(decay, "outer / inner shell " + fmt("%.3f", worst_decay) + " <= 1.1");
    o.require(holder, "Holder quotient / bound " + fmt("%.3f", worst_holder) + " <= 1");
    require_runtime(o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 900.0);
    return o;
}

Outcome c10_potential_fas()
{
    Outcome o;
    const RunReport& r = scenario_run("potential-fas", "run.scenario = potential-fas\n");
    require_assertion(o, r, "abs_disc_non_increasing");
    require_assertion(o, r, "abs_disc_rel_at_max_R");
    require_runtime(o, timing(r, "acceptance_wall"), 3600.0);
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

//! Largest relative difference between numeric CSV fields; infinity when the shapes differ.
double csv_drift(const std::string& a, const std::string& b)
{
    auto fields = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : s) {
            if (ch == ',' || ch == '\n') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        return out;
    };
    const auto fa = fields(a), fb = fields(b);
    if (fa.size() != fb.size()) return HUGE_VAL;
    double worst = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        if (fa[i] == fb[i]) continue;
        char* ea = nullptr;
        char* eb = nullptr;
        const double x = std::strtod(fa[i].c_str(), &ea), y = std::strtod(fb[i].c_str(), &eb);
        if (*ea || *eb) return HUGE_VAL;
        worst = std::max(worst, std::abs(x - y) / std::max(std::abs(x), std::abs(y)));
    }
    return worst;
}

Outcome c11_determinism()
{
    Outcome o;
    const std::vector<std::pair<std::string, std::string>> runs{
        {"cones", "run.scenario = cones-scaling\n"},
        {"statphase", "run.scenario = statphase-bench\n"},
        {"free-fas", "run.scenario = free-fas\n"},
    };
    for (const auto& [tag, text] : runs) {
        const RunReport& base = scenario_run(tag, text);
        const RunReport& again = scenario_run(tag + "-rerun", text);
        const RunReport& wide = scenario_run(tag + "-threads2", text + "run.threads = 2\n");
        for (const auto& file : base.files) {
            if (file == "report.json") continue;
            const std::string a = slurp(g_out / tag / file);
            const bool same = !a.empty() && a == slurp(g_out / (tag + "-rerun") / file) && again.error.empty();
            o.require(same, file + " byte-identical on rerun");
            const double drift = wide.error.empty() ? csv_drift(a, slurp(g_out / (tag + "-threads2") / file)) : HUGE_VAL;
            o.require(drift <= 1e-12, file + " drift at 2 threads " + fmt("%.2g", drift));
        }
    }
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    g_out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance-out");
    fs::create_directories(g_out);
    std::set<int> only;
    for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"algebra suite", c1_algebra},
        {"continuity equation", c2_continuity},
        {"scattering into cones", c3_cones},
        {"stationary phase", c4_statphase},
        {"free flux across surfaces", c5_free_fas},
        {"substitution identity", c6_substitution},
        {"covariant form", c7_covariant},
        {"green kernel", c8_green},
        {"lippmann-schwinger weak coupling", c9_lippmann},
        {"potential-case flux across surfaces", c10_potential_fas},
        {"determinism", c11_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s #%d %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.passed ? 0 : 1;
    }
    std::printf("%s: %d criteria failed\n", failed ? "FAIL" : "PASS", failed);
    return failed ? 1 : 0;
}
