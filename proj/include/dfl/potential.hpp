// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! External static potentials A/ = A0 + A.alpha and the spatial grids the
//! Lippmann-Schwinger equation is discretised on.
#pragma once

#include <functional>
#include <string>

#include "dfl/types.hpp"

namespace dfl {

struct Potential {
    //! Overall real scale g.
    double coupling = 0.0;
    //! A0 / g.
    std::function<double(const Vec3&)> scalar_shape;
    //! Optional A / g; empty for a purely scalar potential.
    std::function<Vec3(const Vec3&)> vector_shape;
    //! |A/| is below 1e-16 g beyond this radius.
    double support_radius = 0.0;
    //! M in |A/(x)| <= M <x>^{-6}, measured on [0, 4 support_radius].
    double decay_M = 0.0;
    std::string description = "zero";

    bool is_scalar() const { return !vector_shape; }
    bool is_zero() const { return coupling == 0.0 || !scalar_shape; }
    double scalar(const Vec3& x) const { return scalar_shape ? coupling * scalar_shape(x) : 0.0; }
    Vec3 vector(const Vec3& x) const { return vector_shape ? coupling * vector_shape(x) : Vec3{}; }
    //! Largest |A0| + |A| at x, the operator norm bound of A/(x).
    double magnitude(const Vec3& x) const { return std::abs(scalar(x)) + norm(vector(x)); }
    //! A/(x) psi.
    Spinor4 apply(const Vec3& x, const Spinor4& psi) const;

    //! g exp(-|x|^2 / width^2).
    static Potential gaussian(double g, double width = 1.0);
    static Potential zero();
};

//! sup_x |A/(x)| <x>^6 over radial rays out to r_max.
double measure_decay_constant(const Potential& pot, double r_max);

//---------------------------------------------------------------------------//
//! The cube [-L, L]^3 with N nodes per axis, spacing h = 2L/(N-1) and
//! trapezoidal weights. Nodes are stored with the first index fastest.
struct SpatialGrid {
    double L = 8.0;
    int N = 32;

    static SpatialGrid cube(double L, int N);
    //! The central n^3 nodes of `parent`, sharing its spacing and node positions.
    static SpatialGrid central(const SpatialGrid& parent, int n);

    double h() const { return 2.0 * L / (N - 1); }
    std::size_t size() const { return static_cast<std::size_t>(N) * N * N; }
    std::size_t index(int i, int j, int k) const { return static_cast<std::size_t>(i) + N * (j + static_cast<std::size_t>(N) * k); }
    std::array<int, 3> coords(std::size_t idx) const;
    double coordinate(int i) const { return -L + i * h(); }
    Vec3 node(std::size_t idx) const;
    double weight(std::size_t idx) const;
    //! Smallest distance from the node to a box face.
    double face_distance(std::size_t idx) const;

    bool operator==(const SpatialGrid& o) const { return L == o.L && N == o.N; }
};

//! Fraction of int |A/| d^3x lying outside the box.
double outside_mass_fraction(const Potential& pot, const SpatialGrid& grid);

//! Smallest central sub-grid of `parent` holding all but `tol` of the
//! potential's mass; `parent` itself when none does.
SpatialGrid support_subgrid(const Potential& pot, const SpatialGrid& parent, double tol = 1e-8);

}  // namespace dfl
