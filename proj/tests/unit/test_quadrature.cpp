// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dfl/quadrature.hpp"
#include "oracles.hpp"

using namespace dfl;

TEST_CASE("gauss-legendre integrates polynomials up to degree 2n-1")
{
    for (int n : {1, 4, 16, 40}) {
        const Rule r = gauss_legendre(n, -1.0, 2.0);
        for (int d = 0; d <= 2 * n - 1; d += std::max(1, n / 4)) {
            double s = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.x[i], d);
            const double exact = (std::pow(2.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("composite and simpson rules")
{
    const Rule c = composite_gauss_legendre(0.0, pi, 8, 10);
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c.w[i] * std::sin(c.x[i]);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    const Rule simp = simpson(0.0, 1.0, 4);
    double q = 0.0;
    for (std::size_t i = 0; i < simp.size(); ++i) q += simp.w[i] * simp.x[i] * simp.x[i] * simp.x[i];
    CHECK(q == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(simpson(0.0, 1.0, 3), Error);
}

TEST_CASE("chebyshev interpolation reproduces polynomials")
{
    const Chebyshev ch(-2.0, 3.0, 12);
    std::vector<double> f(ch.size()), row(ch.size());
    auto poly = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x * x - 0.01 * std::pow(x, 11); };
    for (int j = 0; j < ch.size(); ++j) f[j] = poly(ch.nodes()[j]);
    oracle::Gen g(3);
    for (int t = 0; t < 50; ++t) {
        const double x = g.uniform(-2.0, 3.0);
        ch.row(x, row);
        double p = 0.0;
        for (int j = 0; j < ch.size(); ++j) p += row[j] * f[j];
        CHECK(p == doctest::Approx(poly(x)).epsilon(1e-11));
    }
}

TEST_CASE("compensated sum recovers cancelled low-order bits")
{
    CompensatedSum<double> s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1000.0);
}

TEST_CASE("spherical bessel and legendre values")
{
    std::vector<double> j(4), p(4);
    spherical_bessel_j(3, 1.3, j);
    CHECK(j[0] == doctest::Approx(std::sin(1.3) / 1.3).epsilon(1e-14));
    CHECK(j[1] == doctest::Approx(std::sin(1.3) / (1.3 * 1.3) - std::cos(1.3) / 1.3).epsilon(1e-13));
    legendre_values(3, 0.4, p);
    CHECK(p[2] == doctest::Approx(0.5 * (3 * 0.16 - 1)).epsilon(1e-15));
    CHECK(p[3] == doctest::Approx(0.5 * (5 * 0.064 - 3 * 0.4)).epsilon(1e-15));
}

TEST_CASE("log-log slope and monotonicity helpers")
{
    const std::vector<double> x{25, 50, 100, 200}, y{3.0 / 625, 3.0 / 2500, 3.0 / 10000, 3.0 / 40000};
    CHECK(loglog_slope(x, y) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(non_increasing(y));
    CHECK_FALSE(non_increasing(x));
}
