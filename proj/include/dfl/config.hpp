// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Scenario configuration: a line-oriented `section.key = value` grammar.
//! `#` starts a comment; blank lines are ignored; unknown keys are errors.
//! Vectors and lists are whitespace-separated numbers.
#pragma once

#include <string>
#include <vector>

#include "dfl/types.hpp"

namespace dfl {

struct ScenarioConfig {
    std::string scenario = "free-fas";
    int threads = 1;
    std::string out_dir = "dflux-out";

    // packet
    Vec3 k0{2.0, 0.0, 0.0};
    double sigma = 0.5;
    double m = 1.0;
    std::array<cplx, 2> spin_mix{cplx(1.0, 0.0), cplx(0.0, 0.0)};
    int grid_n = 48;

    // cone
    Vec3 cone_axis{1.0, 0.0, 0.0};
    double cone_half_angle = 0.3;

    // detector
    std::vector<double> R_list{30.0, 60.0, 120.0};
    int cone_theta = 24;
    int sphere_theta = 32;
    int n_phi = 16;
    double k_min = 0.0;
    int n_t = 0;
    bool full_sphere = true;

    // spectral
    int cheb_nodes = 48;
    int legendre_order = 40;
    int polar_nodes = 56;
    int spectral_n_phi = 48;

    // cones
    Vec3 cones_k{2.0, 0.0, 0.0};
    std::vector<double> lambda_list{25.0, 50.0, 100.0, 200.0};

    // statphase
    std::vector<double> mu_list{25.0, 50.0, 100.0, 200.0};
    Vec3 y{0.6, 0.0, 0.0};
    Vec3 y_nostat{1.5, 0.0, 0.0};
    double chi_radius = 1.2;
    double chi_sigma = 0.25;

    // continuity
    int continuity_points = 50;
    double continuity_h = 1e-3;
    std::uint64_t seed = 1;

    // potential
    double coupling = 0.05;
    double width = 1.0;

    // lse
    double box_L = 8.0;
    int box_N = 32;
    double lse_tol = 1e-10;
    int lse_max_iter = 200;
    int bank_n = 8;
    std::string bank_dir;
    int state_cheb = 96;
    int state_polar = 64;
    int state_n_phi = 32;

    // check
    double fas_rel_free = 0.05;
    double fas_rel_potential = 0.10;
    double subst_rel = 1e-6;
    double slope_max = -1.7;
};

//! Throws parse_error (with the line number) or validation_error.
ScenarioConfig parse_config(const std::string& text);
//! Reads the file then parses it; io_error when unreadable.
ScenarioConfig load_config(const std::string& path);
//! Every key with its default and a one-line description, in grammar form.
std::string print_defaults();
//! Every key with its current value, in grammar form.
std::string echo_config(const ScenarioConfig& c);
void validate(const ScenarioConfig& c);

const std::vector<std::string>& scenario_names();

}  // namespace dfl
