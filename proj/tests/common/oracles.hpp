// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Random generators and independent reference constructions shared by the
//! unit tests and the acceptance binary.
#pragma once

#include <cmath>
#include <random>

#include "dfl/green.hpp"
#include "dfl/momentum.hpp"
#include "dfl/spinor.hpp"
#include "dfl/types.hpp"

namespace dfl::oracle {

class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
    Vec3 vec(double r) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }
    //! Uniform on the unit sphere.
    Vec3 direction()
    {
        const double u = uniform(-1.0, 1.0), phi = uniform(0.0, 2.0 * pi);
        const double s = std::sqrt(1.0 - u * u);
        return {s * std::cos(phi), s * std::sin(phi), u};
    }
    cplx complex(double r) { return {uniform(-r, r), uniform(-r, r)}; }
    Spinor4 spinor(double r = 1.0) { return Spinor4{{complex(r), complex(r), complex(r), complex(r)}}; }

  private:
    std::mt19937_64 rng_;
};

//! G = -(E + H0) g with g = e^{ikr}/(4 pi r), H0 = -i alpha.grad + beta m,
//! assembled from the gradient of g and the Dirac matrices.
inline Mat4 green_from_derivatives(double k, const Vec3& x, double m)
{
    const auto& d = dirac_matrices();
    const double r = norm(x);
    const double E = std::sqrt(k * k + m * m);
    const cplx g = std::exp(cplx(0.0, k * r)) / (4.0 * pi * r);
    const cplx dg_dr = g * (cplx(0.0, k) - 1.0 / r);
    const double xs[3] = {x.x, x.y, x.z};
    Mat4 v = (E * g) * Mat4::identity() + (m * g) * d.beta;
    for (int l = 0; l < 3; ++l) v = v + (cplx(0.0, -1.0) * dg_dr * (xs[l] / r)) * d.alpha(l);
    return cplx(-1.0) * v;
}

//! max |(E - H0) G(x)| by second-order central differences of step h.
inline double dirac_residual_fd(double k, double m, const Vec3& x, double h)
{
    const auto& d = dirac_matrices();
    const double E = std::sqrt(k * k + m * m);
    const Mat4 G = green_kernel(k, x, m);
    Mat4 res = cplx(E) * G - cplx(m) * (d.beta * G);
    for (std::size_t a = 0; a < 3; ++a) {
        Vec3 e{};
        e[a] = h;
        const Mat4 dG = cplx(0.5 / h) * (green_kernel(k, x + e, m) - green_kernel(k, x - e, m));
        res = res + cplx(0.0, 1.0) * (d.alpha(static_cast<int>(a)) * dG);
    }
    return max_abs(res);
}

//! A Gaussian packet with random centre, width and spin mixture on an n^3 grid.
inline MomentumAmplitude random_packet(Gen& g, int n = 20)
{
    const Vec3 k0 = g.uniform(0.5, 3.0) * g.direction();
    const double sigma = g.uniform(0.2, 0.6);
    const std::array<cplx, 2> mix{g.complex(1.0), g.complex(1.0)};
    return gaussian_packet(default_packet_grid(k0, sigma, n), k0, sigma, g.uniform(0.5, 2.0), mix);
}

}  // namespace dfl::oracle
