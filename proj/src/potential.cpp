// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/potential.hpp"

#include <sstream>

#include "dfl/quadrature.hpp"
#include "dfl/spinor.hpp"

namespace dfl {

Spinor4 Potential::apply(const Vec3& x, const Spinor4& psi) const
{
    Spinor4 out = cplx(scalar(x)) * psi;
    if (vector_shape) {
        const Vec3 a = vector(x);
        for (int l = 0; l < 3; ++l)
            if (a[l] != 0.0) axpy(out, a[l], apply_alpha(l, psi));
    }
    return out;
}

Potential Potential::gaussian(double g, double width)
{
    if (!(width > 0.0)) throw Error(ErrorKind::invalid_argument, "potential width must be > 0");
    Potential p;
    p.coupling = g;
    const double inv = 1.0 / (width * width);
    p.scalar_shape = [inv](const Vec3& x) { return std::exp(-dot(x, x) * inv); };
    // exp(-r^2 / w^2) < 1e-16 for r > w sqrt(16 ln 10).
    p.support_radius = width * std::sqrt(16.0 * std::log(10.0));
    p.decay_M = measure_decay_constant(p, 4.0 * p.support_radius);
    std::ostringstream os;
    os.precision(17);
    os << "gaussian g=" << g << " width=" << width;
    p.description = os.str();
    return p;
}

Potential Potential::zero()
{
    Potential p;
    p.scalar_shape = [](const Vec3&) { return 0.0; };
    return p;
}

double measure_decay_constant(const Potential& pot, double r_max)
{
    if (pot.is_zero()) return 0.0;
    // 26 directions: axes, face diagonals and body diagonals.
    double M = 0.0;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                const Vec3 e = normalized(Vec3{double(a), double(b), double(c)});
                for (int i = 0; i <= 2000; ++i) {
                    const double r = r_max * i / 2000.0;
                    const double br = 1.0 + r * r;
                    M = std::max(M, pot.magnitude(r * e) * br * br * br);
                }
            }
    return M;
}

//---------------------------------------------------------------------------//

SpatialGrid SpatialGrid::cube(double L, int N)
{
    if (!(L > 0.0)) throw Error(ErrorKind::invalid_argument, "box half-width must be > 0");
    if (N < 3) throw Error(ErrorKind::invalid_argument, "spatial grid needs N >= 3");
    SpatialGrid g;
    g.L = L;
    g.N = N;
    return g;
}

SpatialGrid SpatialGrid::central(const SpatialGrid& parent, int n)
{
    if (n < 3 || n > parent.N || (parent.N - n) % 2 != 0)
        throw Error(ErrorKind::invalid_argument, "central sub-grid must have N - n even and n >= 3");
    return cube(0.5 * (n - 1) * parent.h(), n);
}

std::array<int, 3> SpatialGrid::coords(std::size_t idx) const
{
    const int i = static_cast<int>(idx % N);
    const int j = static_cast<int>((idx / N) % N);
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(N) * N));
    return {i, j, k};
}

Vec3 SpatialGrid::node(std::size_t idx) const
{
    const auto c = coords(idx);
    return {coordinate(c[0]), coordinate(c[1]), coordinate(c[2])};
}

double SpatialGrid::weight(std::size_t idx) const
{
    const auto c = coords(idx);
    const double h3 = h() * h() * h();
    double w = h3;
    for (int a : c)
        if (a == 0 || a == N - 1) w *= 0.5;
    return w;
}

double SpatialGrid::face_distance(std::size_t idx) const
{
    const auto c = coords(idx);
    int d = N;
    for (int a : c) d = std::min({d, a, N - 1 - a});
    return d * h();
}

double outside_mass_fraction(const Potential& pot, const SpatialGrid& grid)
{
    if (pot.is_zero()) return 0.0;
    // Spherical quadrature out to the support radius; the box part is the
    // same sum restricted to points inside the cube.
    const double rmax = std::max(pot.support_radius, grid.L * std::sqrt(3.0)) * 1.05;
    const Rule r = composite_gauss_legendre(0.0, rmax, 64, 16);
    const Rule u = gauss_legendre(48, -1.0, 1.0);
    const int nphi = 96;
    CompensatedSum<double> total, inside;
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double st = std::sqrt(1.0 - u.x[j] * u.x[j]);
            for (int l = 0; l < nphi; ++l) {
                const double ph = 2.0 * pi * l / nphi;
                const Vec3 x = r.x[i] * Vec3{st * std::cos(ph), st * std::sin(ph), u.x[j]};
                const double v = r.w[i] * u.w[j] * (2.0 * pi / nphi) * r.x[i] * r.x[i] * pot.magnitude(x);
                total.add(v);
                if (std::abs(x[0]) <= grid.L && std::abs(x[1]) <= grid.L && std::abs(x[2]) <= grid.L) inside.add(v);
            }
        }
    const double t = total.value();
    return t > 0.0 ? std::max(0.0, (t - inside.value()) / t) : 0.0;
}

SpatialGrid support_subgrid(const Potential& pot, const SpatialGrid& parent, double tol)
{
    for (int n = 3 + (parent.N - 3) % 2; n < parent.N; n += 2) {
        const SpatialGrid g = SpatialGrid::central(parent, n);
        if (outside_mass_fraction(pot, g) < tol) return g;
    }
    return parent;
}

}  // namespace dfl
