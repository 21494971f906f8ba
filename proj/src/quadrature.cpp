// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace dfl {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::grid_too_small: return "grid-too-small";
        case ErrorKind::aliasing: return "aliasing-warning";
        case ErrorKind::resolution: return "resolution-error";
        case ErrorKind::no_stationary_point: return "no-stationary-point";
        case ErrorKind::unsupported_a: return "unsupported-a";
        case ErrorKind::singular_origin: return "singular-origin";
        case ErrorKind::no_contraction: return "no-contraction";
        case ErrorKind::tol_not_reached: return "tol-not-reached";
        case ErrorKind::bank_mismatch: return "bank-mismatch";
        case ErrorKind::layout_unsupported: return "layout-unsupported";
        case ErrorKind::profile_required: return "profile-required";
        case ErrorKind::parse_error: return "parse-error";
        case ErrorKind::validation_error: return "validation-error";
        case ErrorKind::io_error: return "io-error";
    }
    return "unknown";
}

namespace {

Rule make_gauss_legendre(int n)
{
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // One more evaluation for a consistent derivative.
                p0 = 1.0; p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

}  // namespace

const Rule& gauss_legendre(int n)
{
    if (n < 1) throw Error(ErrorKind::invalid_argument, "gauss_legendre needs n >= 1");
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard lock(mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(make_gauss_legendre(n));
    return *slot;
}

Rule gauss_legendre(int n, double a, double b)
{
    const Rule& ref = gauss_legendre(n);
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.x[i] = c + h * ref.x[i];
        r.w[i] = h * ref.w[i];
    }
    return r;
}

Rule composite_gauss_legendre(double a, double b, int panels, int n)
{
    if (panels < 1) throw Error(ErrorKind::invalid_argument, "composite rule needs >= 1 panel");
    Rule r;
    r.x.reserve(static_cast<std::size_t>(panels) * n);
    r.w.reserve(static_cast<std::size_t>(panels) * n);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        Rule q = gauss_legendre(n, a + p * h, a + (p + 1) * h);
        r.x.insert(r.x.end(), q.x.begin(), q.x.end());
        r.w.insert(r.w.end(), q.w.begin(), q.w.end());
    }
    return r;
}

Rule simpson(double a, double b, int intervals)
{
    if (intervals < 2 || intervals % 2 != 0)
        throw Error(ErrorKind::invalid_argument, "simpson needs an even interval count >= 2");
    Rule r;
    r.x.resize(intervals + 1);
    r.w.resize(intervals + 1);
    const double h = (b - a) / intervals;
    for (int i = 0; i <= intervals; ++i) {
        r.x[i] = a + i * h;
        const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        r.w[i] = c * h / 3.0;
    }
    return r;
}

Rule trapezoid(double a, double b, int n)
{
    if (n < 2) throw Error(ErrorKind::invalid_argument, "trapezoid needs n >= 2");
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) {
        r.x[i] = a + i * h;
        r.w[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
    return r;
}

void legendre_values(int qmax, double x, std::span<double> out)
{
    out[0] = 1.0;
    if (qmax >= 1) out[1] = x;
    for (int q = 2; q <= qmax; ++q)
        out[q] = ((2.0 * q - 1.0) * x * out[q - 1] - (q - 1.0) * out[q - 2]) / q;
}

void spherical_bessel_j(int qmax, double x, std::span<double> out)
{
    if (x < 0.0) throw Error(ErrorKind::invalid_argument, "spherical_bessel_j needs x >= 0");
    if (x < 1e-6) {
        // Leading term x^q / (2q+1)!! with its first correction.
        double t = 1.0;
        for (int q = 0; q <= qmax; ++q) {
            out[q] = t * (1.0 - x * x / (2.0 * (2 * q + 3)));
            t *= x / (2 * q + 3);
        }
        return;
    }
    const double s = std::sin(x), c = std::cos(x);
    const double j0 = s / x;
    const double j1 = s / (x * x) - c / x;
    if (x > qmax) {
        out[0] = j0;
        if (qmax >= 1) out[1] = j1;
        for (int q = 1; q < qmax; ++q) out[q + 1] = (2.0 * q + 1.0) / x * out[q] - out[q - 1];
        return;
    }
    const int start = qmax + 16 + static_cast<int>(std::sqrt(40.0 * (qmax + 1)));
    std::vector<double> tmp(start + 2, 0.0);
    tmp[start] = 1e-300;
    for (int q = start; q >= 1; --q) {
        tmp[q - 1] = (2.0 * q + 1.0) / x * tmp[q] - tmp[q + 1];
        if (std::abs(tmp[q - 1]) > 1e250)
            for (int k = q - 1; k <= start; ++k) tmp[k] *= 1e-250;
    }
    for (int q = 0; q <= qmax; ++q) out[q] = tmp[q];
    // Normalise against whichever of j0, j1 is better conditioned.
    const double scale = std::abs(j0) > std::abs(j1) ? j0 / tmp[0] : j1 / tmp[1];
    for (int q = 0; q <= qmax; ++q) out[q] *= scale;
}

Chebyshev::Chebyshev(double a, double b, int n) : a_(a), b_(b)
{
    if (n < 2) throw Error(ErrorKind::invalid_argument, "Chebyshev needs n >= 2");
    nodes_.resize(n);
    bary_.resize(n);
    for (int j = 0; j < n; ++j) {
        const double t = -std::cos(pi * j / (n - 1));
        nodes_[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
        bary_[j] = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0);
    }
}

void Chebyshev::row(double x, std::span<double> out) const
{
    const int n = size();
    for (int j = 0; j < n; ++j) {
        if (x == nodes_[j]) {
            for (int i = 0; i < n; ++i) out[i] = (i == j) ? 1.0 : 0.0;
            return;
        }
    }
    double den = 0.0;
    for (int j = 0; j < n; ++j) {
        out[j] = bary_[j] / (x - nodes_[j]);
        den += out[j];
    }
    for (int j = 0; j < n; ++j) out[j] /= den;
}

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw Error(ErrorKind::invalid_argument, "slope fit needs >= 2 matched samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool non_increasing(std::span<const double> v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) return false;
    return true;
}

}  // namespace dfl
