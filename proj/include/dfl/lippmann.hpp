// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Generalized eigenfunctions phi~ = phi + zeta of H0 + A/ from the
//! Lippmann-Schwinger equation
//!
//!   zeta = G * (A/ phi) + G * (A/ zeta),    (G * f)(x) = int G(x - x') f(x') d^3x',
//!
//! solved by fixed-point iteration on a SpatialGrid. The convolution is a
//! zero-padded FFT product; the singular self-cell uses the ball average.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dfl/green.hpp"
#include "dfl/potential.hpp"
#include "dfl/spinor.hpp"

namespace dfl {

//! Discrete K f = G * (A/ f) at fixed |k|.
class LseOperator {
  public:
    LseOperator(const SpatialGrid& grid, const Potential& pot, double kmag, double m);
    ~LseOperator();
    LseOperator(const LseOperator&) = delete;
    LseOperator& operator=(const LseOperator&) = delete;

    const SpatialGrid& grid() const { return grid_; }
    double kmag() const { return k_; }
    double mass() const { return m_; }
    //! FFT side length, at least 2N - 1.
    int fft_size() const { return M_; }

    //! out = K f. Not reentrant: one call at a time per operator.
    void apply(std::span<const Spinor4> f, std::span<Spinor4> out) const;
    //! Direct O(N^6) sum, serial.
    void apply_reference(std::span<const Spinor4> f, std::span<Spinor4> out) const;
    //! (K f)(x) at an arbitrary point by the direct sum; x must not be a
    //! source node unless `node` gives its index.
    Spinor4 apply_at(std::span<const Spinor4> f, const Vec3& x, std::ptrdiff_t node = -1) const;

  private:
    //! w(x') A/(x') f(x').
    void source(std::span<const Spinor4> f, std::vector<Spinor4>& s) const;
    //! G at grid offset d, the self-cell average at d = 0.
    GreenScalars kernel_at(const Vec3& d) const;

    SpatialGrid grid_;
    double k_, m_, E_;
    int M_;
    Potential pot_;
    std::vector<double> w_;
    std::vector<char> active_;  // A/ does not vanish at the node
    bool zero_ = false;
    struct Fft;
    std::unique_ptr<Fft> fft_;
};

struct LseOptions {
    double tol = 1e-10;
    int max_iter = 200;
    //! Return the last iterate instead of raising tol_not_reached.
    bool allow_unconverged = false;
    //! Mass for the overload that builds its own operator.
    double m = 1.0;
};

struct ConvergenceRecord {
    int iterations = 0;
    double last_delta = 0.0;
    bool converged = false;
    //! sup-node change per iteration.
    std::vector<double> deltas;
    //! deltas never increase.
    bool monotone() const;
};

//! e^{i k.x} s_k^s.
Spinor4 plane_wave(const Vec3& k, int s, double m, const Vec3& x);

struct EigenfunctionField {
    Vec3 k{};
    int s = 1;
    double m = 1.0;
    SpatialGrid grid;
    std::vector<Spinor4> zeta;
    ConvergenceRecord record;

    Spinor4 spinor() const;
    Spinor4 phi(std::size_t node) const;
    Spinor4 phi_tilde(std::size_t node) const { return phi(node) + zeta[node]; }
};

//! Iterates zeta <- K (phi + zeta) from zeta = 0. Raises no_contraction when
//! the delta ratio is >= 1 for three consecutive iterations and
//! tol_not_reached after max_iter.
EigenfunctionField born_solve(const Potential& pot, const Vec3& k, int s, const SpatialGrid& grid,
                              const LseOptions& opt = {});
EigenfunctionField born_solve(const LseOperator& op, const Vec3& k, int s, const LseOptions& opt = {});

//---------------------------------------------------------------------------//
//! max over nodes at least max(3, stride) h from the faces of
//! ||(-i alpha.grad + A/ + beta m - E) phi~||_s, central differences of
//! step stride * h.
double eigen_residual(const EigenfunctionField& field, const Potential& pot, int stride = 1);
//! The same for the bare plane wave with no potential.
double free_residual_floor(const Vec3& k, int s, double m, const SpatialGrid& grid, int stride = 1);

struct DecayCertificate {
    //! Shell edges r_j = j L / n, the last shell taking every node beyond.
    std::vector<double> edges;
    //! max |x| ||zeta||_s per shell.
    std::vector<double> shell_max;
    double inner_max = 0.0;   // |x| <= L/2
    double outer_max = 0.0;   // last shell
    double sup = 0.0;
    //! outer_max <= 1.1 inner_max.
    bool passed = true;
};

DecayCertificate zeta_decay_certificate(const EigenfunctionField& field, int shells = 8);

struct HolderReport {
    //! Multiples j of h used as |delta|.
    std::vector<int> steps;
    //! max ||phi~(x + delta) - phi~(x)||_s / |delta| per step.
    std::vector<double> max_quotient;
    //! |k| + 1.5 sup ||d zeta||, the Lipschitz allowance.
    double bound = 0.0;
    bool bounded = true;
};

//! Difference quotients at `samples` random interior nodes along random axes.
HolderReport holder_check(const EigenfunctionField& field, int samples = 200, std::uint64_t seed = 7);

//! sup over every `stride`-th node of ||K(phi + zeta) - zeta||_s, the
//! operator applied by the direct sum.
double fixed_point_residual(const EigenfunctionField& field, const Potential& pot, int stride = 97);

}  // namespace dfl
