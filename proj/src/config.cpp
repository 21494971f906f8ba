// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace dfl {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

struct BadValue {
    std::string what;
};

double to_double(const std::string& w)
{
    double v = 0.0;
    const auto r = std::from_chars(w.data(), w.data() + w.size(), v);
    if (r.ec != std::errc() || r.ptr != w.data() + w.size()) throw BadValue{"'" + w + "' is not a number"};
    return v;
}

long long to_int(const std::string& w)
{
    long long v = 0;
    const auto r = std::from_chars(w.data(), w.data() + w.size(), v);
    if (r.ec != std::errc() || r.ptr != w.data() + w.size()) throw BadValue{"'" + w + "' is not an integer"};
    return v;
}

std::vector<double> numbers(const std::string& s, std::size_t want = 0)
{
    std::vector<double> out;
    for (const auto& w : words(s)) out.push_back(to_double(w));
    if (want && out.size() != want) throw BadValue{"expected " + std::to_string(want) + " numbers"};
    if (out.empty()) throw BadValue{"expected at least one number"};
    return out;
}

std::string fmt(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string fmt(const Vec3& v) { return fmt(v.x) + " " + fmt(v.y) + " " + fmt(v.z); }

std::string fmt(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
    return s;
}

struct Key {
    std::string name;
    std::string doc;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <class T>
Key real_key(std::string name, std::string doc, T ScenarioConfig::*f)
{
    return {std::move(name), std::move(doc),
            [f](ScenarioConfig& c, const std::string& v) { c.*f = numbers(v, 1)[0]; },
            [f](const ScenarioConfig& c) { return fmt(c.*f); }};
}

template <class T>
Key int_key(std::string name, std::string doc, T ScenarioConfig::*f)
{
    return {std::move(name), std::move(doc),
            [f](ScenarioConfig& c, const std::string& v) {
                const auto w = words(v);
                if (w.size() != 1) throw BadValue{"expected one integer"};
                c.*f = static_cast<T>(to_int(w[0]));
            },
            [f](const ScenarioConfig& c) { return std::to_string(c.*f); }};
}

Key vec_key(std::string name, std::string doc, Vec3 ScenarioConfig::*f)
{
    return {std::move(name), std::move(doc),
            [f](ScenarioConfig& c, const std::string& v) {
                const auto n = numbers(v, 3);
                c.*f = Vec3{n[0], n[1], n[2]};
            },
            [f](const ScenarioConfig& c) { return fmt(c.*f); }};
}

Key list_key(std::string name, std::string doc, std::vector<double> ScenarioConfig::*f)
{
    return {std::move(name), std::move(doc), [f](ScenarioConfig& c, const std::string& v) { c.*f = numbers(v); },
            [f](const ScenarioConfig& c) { return fmt(c.*f); }};
}

Key string_key(std::string name, std::string doc, std::string ScenarioConfig::*f)
{
    return {std::move(name), std::move(doc), [f](ScenarioConfig& c, const std::string& v) { c.*f = v; },
            [f](const ScenarioConfig& c) { return c.*f; }};
}

Key bool_key(std::string name, std::string doc, bool ScenarioConfig::*f)
{
    return {std::move(name), std::move(doc),
            [f](ScenarioConfig& c, const std::string& v) {
                if (v == "true" || v == "1") c.*f = true;
                else if (v == "false" || v == "0") c.*f = false;
                else throw BadValue{"expected true or false"};
            },
            [f](const ScenarioConfig& c) { return std::string(c.*f ? "true" : "false"); }};
}

const std::vector<Key>& keys()
{
    using C = ScenarioConfig;
    static const std::vector<Key> table = {
        string_key("run.scenario", "free-fas | potential-fas | cones-scaling | statphase-bench | continuity-suite",
                   &C::scenario),
        int_key("run.threads", "OpenMP threads", &C::threads),
        string_key("run.out_dir", "output directory (--out-dir and DFL_OUT_DIR take precedence)", &C::out_dir),
        vec_key("packet.k0", "Gaussian packet centre", &C::k0),
        real_key("packet.sigma", "momentum width", &C::sigma),
        real_key("packet.m", "mass", &C::m),
        {"packet.spin_mix", "channel weights as re1 im1 re2 im2",
         [](C& c, const std::string& v) {
             const auto n = numbers(v, 4);
             c.spin_mix = {cplx(n[0], n[1]), cplx(n[2], n[3])};
         },
         [](const C& c) {
             return fmt(c.spin_mix[0].real()) + " " + fmt(c.spin_mix[0].imag()) + " " + fmt(c.spin_mix[1].real()) +
                    " " + fmt(c.spin_mix[1].imag());
         }},
        int_key("packet.grid_n", "momentum nodes per axis over k0 +- 6 sigma", &C::grid_n),
        vec_key("cone.axis", "cone axis", &C::cone_axis),
        real_key("cone.half_angle", "cone half-angle in radians, in (0, pi]", &C::cone_half_angle),
        list_key("detector.R_list", "detector radii, increasing", &C::R_list),
        int_key("detector.cone_theta", "Gauss-Legendre nodes in cos(theta) on the cone", &C::cone_theta),
        int_key("detector.sphere_theta", "Gauss-Legendre nodes in cos(theta) on the full sphere", &C::sphere_theta),
        int_key("detector.n_phi", "azimuthal nodes on the detector", &C::n_phi),
        real_key("detector.k_min", "lower momentum cut; 0 = max(|<k>| - 5 sigma, 0.2 m)", &C::k_min),
        int_key("detector.n_t", "Simpson intervals in t; 0 = max(400, 8 R m)", &C::n_t),
        bool_key("detector.full_sphere", "also integrate the full sphere", &C::full_sphere),
        int_key("spectral.cheb_nodes", "Chebyshev nodes in |k| for the angular moments", &C::cheb_nodes),
        int_key("spectral.legendre_order", "Legendre order of the polar expansion", &C::legendre_order),
        int_key("spectral.polar_nodes", "polar quadrature nodes, > legendre_order", &C::polar_nodes),
        int_key("spectral.n_phi", "azimuthal nodes of the angular moments", &C::spectral_n_phi),
        vec_key("cones.k", "momentum k in psi(lambda k)", &C::cones_k),
        list_key("cones.lambda_list", "scaling parameters, increasing", &C::lambda_list),
        list_key("statphase.mu_list", "large parameters, increasing and spanning a decade", &C::mu_list),
        vec_key("statphase.y", "y with a stationary point (|y| < 1)", &C::y),
        vec_key("statphase.y_nostat", "y without a stationary point (|y| > 1)", &C::y_nostat),
        real_key("statphase.chi_radius", "support radius of the test amplitude", &C::chi_radius),
        real_key("statphase.chi_sigma", "Gaussian width of the test amplitude; 0 = flat", &C::chi_sigma),
        int_key("continuity.points", "random spacetime points", &C::continuity_points),
        real_key("continuity.h", "finite-difference step", &C::continuity_h),
        int_key("continuity.seed", "random seed", &C::seed),
        real_key("potential.coupling", "g in A0 = g exp(-|x|^2 / width^2)", &C::coupling),
        real_key("potential.width", "Gaussian width of the potential", &C::width),
        real_key("lse.box_L", "spatial box half-width", &C::box_L),
        int_key("lse.box_N", "spatial nodes per axis", &C::box_N),
        real_key("lse.tol", "sup-node change that ends the Born iteration", &C::lse_tol),
        int_key("lse.max_iter", "Born iteration limit", &C::lse_max_iter),
        int_key("lse.bank_n", "eigen-bank momentum nodes per axis over the packet box", &C::bank_n),
        string_key("lse.bank_dir", "reuse or persist the eigen-bank here; empty = keep in memory", &C::bank_dir),
        int_key("lse.state_cheb", "Chebyshev nodes in |k| for the scattered wave", &C::state_cheb),
        int_key("lse.state_polar", "polar nodes of the scattered-wave k-integral", &C::state_polar),
        int_key("lse.state_n_phi", "azimuthal nodes of the scattered-wave k-integral", &C::state_n_phi),
        real_key("check.fas_rel_free", "bound on abs_disc / momentum_side at the largest R, free case", &C::fas_rel_free),
        real_key("check.fas_rel_potential", "the same with the potential", &C::fas_rel_potential),
        real_key("check.subst_rel", "bound on |substituted - direct| / direct", &C::subst_rel),
        real_key("check.slope_max", "largest accepted log-log error slope", &C::slope_max),
    };
    return table;
}

void increasing_positive(const std::vector<double>& v, const char* name)
{
    if (v.empty()) throw Error(ErrorKind::validation_error, std::string(name) + " must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw Error(ErrorKind::validation_error, std::string(name) + " entries must be > 0");
        if (i && !(v[i] > v[i - 1])) throw Error(ErrorKind::validation_error, std::string(name) + " must increase");
    }
}

void require(bool ok, const std::string& what)
{
    if (!ok) throw Error(ErrorKind::validation_error, what);
}

}  // namespace

const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names = {"free-fas", "potential-fas", "cones-scaling", "statphase-bench",
                                                   "continuity-suite"};
    return names;
}

void validate(const ScenarioConfig& c)
{
    const auto& n = scenario_names();
    require(std::find(n.begin(), n.end(), c.scenario) != n.end(), "run.scenario '" + c.scenario + "' is unknown");
    require(c.threads >= 1, "run.threads must be >= 1");
    require(!c.out_dir.empty(), "run.out_dir must not be empty");
    require(c.sigma > 0.0, "packet.sigma must be > 0");
    require(c.m > 0.0, "packet.m must be > 0");
    require(c.spin_mix[0] != 0.0 || c.spin_mix[1] != 0.0, "packet.spin_mix must not vanish");
    require(c.grid_n >= 8, "packet.grid_n must be >= 8");
    require(norm(c.cone_axis) > 0.0, "cone.axis must not vanish");
    require(c.cone_half_angle > 0.0 && c.cone_half_angle <= pi, "cone.half_angle must lie in (0, pi]");
    increasing_positive(c.R_list, "detector.R_list");
    require(c.cone_theta >= 4 && c.sphere_theta >= 4 && c.n_phi >= 4, "detector node counts must be >= 4");
    require(c.k_min >= 0.0, "detector.k_min must be >= 0");
    require(c.n_t >= 0, "detector.n_t must be >= 0");
    require(c.cheb_nodes >= 4 && c.legendre_order >= 1 && c.spectral_n_phi >= 4, "spectral orders are too small");
    require(c.polar_nodes > c.legendre_order, "spectral.polar_nodes must exceed spectral.legendre_order");
    require(norm(c.cones_k) > 0.0, "cones.k must not vanish");
    increasing_positive(c.lambda_list, "cones.lambda_list");
    require(c.lambda_list.size() >= 2, "cones.lambda_list needs two entries");
    increasing_positive(c.mu_list, "statphase.mu_list");
    require(c.mu_list.size() >= 2, "statphase.mu_list needs two entries");
    require(norm(c.y) < 1.0, "statphase.y must have |y| < 1");
    require(norm(c.y_nostat) > 1.0, "statphase.y_nostat must have |y| > 1");
    require(c.chi_radius > 0.0, "statphase.chi_radius must be > 0");
    require(c.chi_sigma >= 0.0, "statphase.chi_sigma must be >= 0");
    require(c.continuity_points >= 1, "continuity.points must be >= 1");
    require(c.continuity_h > 0.0, "continuity.h must be > 0");
    require(c.width > 0.0, "potential.width must be > 0");
    require(std::isfinite(c.coupling), "potential.coupling must be finite");
    require(c.box_L > 0.0, "lse.box_L must be > 0");
    require(c.box_N >= 8, "lse.box_N must be >= 8");
    require(c.lse_tol > 0.0, "lse.tol must be > 0");
    require(c.lse_max_iter >= 1, "lse.max_iter must be >= 1");
    require(c.bank_n >= 2, "lse.bank_n must be >= 2");
    require(c.state_cheb >= 4 && c.state_polar >= 4 && c.state_n_phi >= 4, "lse.state_* orders must be >= 4");
    require(c.fas_rel_free > 0.0 && c.fas_rel_potential > 0.0 && c.subst_rel > 0.0, "check bounds must be > 0");
    require(c.slope_max < 0.0, "check.slope_max must be < 0");
}

ScenarioConfig parse_config(const std::string& text)
{
    ScenarioConfig c;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        auto where = [&](const std::string& what) {
            return Error(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": " + what);
        };
        if (eq == std::string::npos) throw where("expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& table = keys();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == key; });
        if (it == table.end()) throw where("unknown key '" + key + "'");
        try {
            it->set(c, value);
        } catch (const BadValue& b) {
            throw where(key + ": " + b.what);
        }
    }
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw Error(ErrorKind::io_error, "cannot read config " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string print_defaults()
{
    const ScenarioConfig c;
    std::string out;
    for (const auto& k : keys()) out += "# " + k.doc + "\n" + k.name + " = " + k.get(c) + "\n";
    return out;
}

std::string echo_config(const ScenarioConfig& c)
{
    std::string out;
    for (const auto& k : keys()) out += k.name + " = " + k.get(c) + "\n";
    return out;
}

}  // namespace dfl
