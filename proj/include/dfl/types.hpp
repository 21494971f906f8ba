// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace dfl {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

//---------------------------------------------------------------------------//
// Real 3-vector (momenta, positions, directions).
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a)
{
    const double n = norm(a);
    return n > 0.0 ? (1.0 / n) * a : Vec3{0.0, 0.0, 1.0};
}

// Orthonormal frame (e1, e2, e3) with e3 along a given axis.
struct Frame {
    Vec3 e1, e2, e3;

    static Frame aligned(const Vec3& axis)
    {
        const Vec3 a = normalized(axis);
        // Helper: the Cartesian axis least aligned with `a`.
        Vec3 helper{1.0, 0.0, 0.0};
        const double ax = std::abs(a.x), ay = std::abs(a.y), az = std::abs(a.z);
        if (ay <= ax && ay <= az)
            helper = {0.0, 1.0, 0.0};
        else if (az <= ax && az <= ay)
            helper = {0.0, 0.0, 1.0};
        const Vec3 e1 = normalized(cross(helper, a));
        return {e1, cross(a, e1), a};
    }

    // Map local coordinates (u1, u2, u3) to the global frame.
    Vec3 to_global(double u1, double u2, double u3) const { return u1 * e1 + u2 * e2 + u3 * e3; }
};

//---------------------------------------------------------------------------//
// Four-component complex spinor.
struct Spinor4 {
    std::array<cplx, 4> c{};

    constexpr const cplx& operator[](std::size_t i) const { return c[i]; }
    constexpr cplx& operator[](std::size_t i) { return c[i]; }

    Spinor4& operator+=(const Spinor4& o)
    {
        for (std::size_t i = 0; i < 4; ++i) c[i] += o.c[i];
        return *this;
    }
    Spinor4& operator-=(const Spinor4& o)
    {
        for (std::size_t i = 0; i < 4; ++i) c[i] -= o.c[i];
        return *this;
    }
    Spinor4& operator*=(cplx s)
    {
        for (auto& v : c) v *= s;
        return *this;
    }
};

inline Spinor4 operator+(Spinor4 a, const Spinor4& b) { return a += b; }
inline Spinor4 operator-(Spinor4 a, const Spinor4& b) { return a -= b; }
inline Spinor4 operator*(cplx s, Spinor4 a) { return a *= s; }
inline Spinor4 operator*(Spinor4 a, cplx s) { return a *= s; }

// a += s * b, the inner loop of every quadrature in the project.
inline void axpy(Spinor4& a, cplx s, const Spinor4& b)
{
    for (std::size_t i = 0; i < 4; ++i) a.c[i] += s * b.c[i];
}

//---------------------------------------------------------------------------//
// Dense 4x4 complex matrix, row-major.
struct Mat4 {
    std::array<cplx, 16> a{};

    constexpr cplx& operator()(std::size_t r, std::size_t c) { return a[4 * r + c]; }
    constexpr const cplx& operator()(std::size_t r, std::size_t c) const { return a[4 * r + c]; }

    static Mat4 identity()
    {
        Mat4 m;
        for (std::size_t i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Mat4 operator*(const Mat4& x, const Mat4& y)
{
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < 4; ++k) s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}
inline Spinor4 operator*(const Mat4& x, const Spinor4& v)
{
    Spinor4 r;
    for (std::size_t i = 0; i < 4; ++i)
        r[i] = x(i, 0) * v[0] + x(i, 1) * v[1] + x(i, 2) * v[2] + x(i, 3) * v[3];
    return r;
}
inline Mat4 operator+(Mat4 x, const Mat4& y)
{
    for (std::size_t i = 0; i < 16; ++i) x.a[i] += y.a[i];
    return x;
}
inline Mat4 operator-(Mat4 x, const Mat4& y)
{
    for (std::size_t i = 0; i < 16; ++i) x.a[i] -= y.a[i];
    return x;
}
inline Mat4 operator*(cplx s, Mat4 x)
{
    for (auto& v : x.a) v *= s;
    return x;
}
inline Mat4 adjoint(const Mat4& x)
{
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r(i, j) = std::conj(x(j, i));
    return r;
}
inline double max_abs(const Mat4& x)
{
    double m = 0.0;
    for (const auto& v : x.a) m = std::max(m, std::abs(v));
    return m;
}

//---------------------------------------------------------------------------//
// Error taxonomy. Every failure path named in the module contracts maps to a
// kind so callers (and the CLI) can react without parsing messages.
enum class ErrorKind {
    invalid_argument,
    grid_too_small,
    aliasing,
    resolution,
    no_stationary_point,
    unsupported_a,
    singular_origin,
    no_contraction,
    tol_not_reached,
    bank_mismatch,
    layout_unsupported,
    profile_required,
    parse_error,
    validation_error,
    io_error,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace dfl
