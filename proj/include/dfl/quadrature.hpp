// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! One-dimensional quadrature rules, Chebyshev interpolation and the small
//! numerical helpers shared by every module.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dfl/types.hpp"

namespace dfl {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;

    std::size_t size() const { return x.size(); }
};

//! Gauss-Legendre rule with n nodes on [-1, 1] (cached, thread safe).
const Rule& gauss_legendre(int n);
//! Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);
//! Composite Gauss-Legendre: `panels` equal panels of order n on [a, b].
Rule composite_gauss_legendre(double a, double b, int panels, int n);
//! Composite Simpson rule with an even number of intervals on [a, b].
Rule simpson(double a, double b, int intervals);
//! Trapezoid rule with n >= 2 equispaced nodes on [a, b].
Rule trapezoid(double a, double b, int n);

//! Legendre polynomials P_0..P_qmax at x.
void legendre_values(int qmax, double x, std::span<double> out);

//! Spherical Bessel functions j_0..j_qmax at x >= 0. Upward recurrence for
//! x > qmax, Miller's downward recurrence otherwise.
void spherical_bessel_j(int qmax, double x, std::span<double> out);

//---------------------------------------------------------------------------//
//! Chebyshev-Lobatto interpolant on [a, b] in barycentric form.
class Chebyshev {
  public:
    Chebyshev(double a, double b, int n);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    double a() const { return a_; }
    double b() const { return b_; }

    //! Interpolation weights l_j(x) so that p(x) = sum_j l_j(x) f_j.
    void row(double x, std::span<double> out) const;

  private:
    double a_, b_;
    std::vector<double> nodes_;
    std::vector<double> bary_;
};

//---------------------------------------------------------------------------//
//! Neumaier compensated accumulator.
template<class T>
class CompensatedSum {
  public:
    void add(T v)
    {
        const T t = sum_ + v;
        if (magnitude(sum_) >= magnitude(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

  private:
    static double magnitude(double v) { return std::abs(v); }
    static double magnitude(const cplx& v) { return std::abs(v.real()) + std::abs(v.imag()); }

    T sum_{};
    T comp_{};
};

//! Neumaier sums for complex values are done per component so the error
//! compensation stays exact.
template<>
class CompensatedSum<cplx> {
  public:
    void add(cplx v)
    {
        re_.add(v.real());
        im_.add(v.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

  private:
    CompensatedSum<double> re_, im_;
};

//! Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

//! True if the sequence never increases (ties allowed).
bool non_increasing(std::span<const double> v);

}  // namespace dfl
