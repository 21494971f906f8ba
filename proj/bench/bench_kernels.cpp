// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include "dfl/lippmann.hpp"
#include "dfl/parallel.hpp"
#include "dfl/propagator.hpp"
#include "dfl/spectral.hpp"
#include "dfl/statphase.hpp"

using namespace dfl;

namespace {

const MomentumAmplitude& packet()
{
    static const MomentumAmplitude amp =
        gaussian_packet(default_packet_grid({2, 0, 0}, 0.5), {2, 0, 0}, 0.5, 1.0, {1.0, 0.0});
    return amp;
}

std::vector<SpacetimePoint> points(int n)
{
    std::vector<SpacetimePoint> p;
    for (int i = 0; i < n; ++i) p.push_back({{0.3 * i, 0.1 * i, -0.05 * i}, 0.2 * i});
    return p;
}

void BM_wave_batch(benchmark::State& st)
{
    set_threads(static_cast<int>(st.range(0)));
    const WaveEvaluator w(packet());
    const auto pts = points(16);
    for (auto _ : st) benchmark::DoNotOptimize(w.batch(pts));
}

void BM_wave_serial(benchmark::State& st)
{
    const WaveEvaluator w(packet());
    const auto pts = points(16);
    for (auto _ : st)
        for (const auto& p : pts) benchmark::DoNotOptimize(w.serial_reference(p));
}

std::vector<Vec3> sphere_points(int n)
{
    std::vector<Vec3> p;
    for (int i = 0; i < n; ++i) p.push_back({30.0 * std::cos(0.01 * i), 30.0 * std::sin(0.01 * i), 0.0});
    return p;
}

void BM_spectral_values(benchmark::State& st)
{
    set_threads(static_cast<int>(st.range(0)));
    const SpectralEvaluator ev(packet(), sphere_points(64), 60.0);
    std::vector<double> t(100);
    for (int i = 0; i < 100; ++i) t[i] = 0.6 * i;
    for (auto _ : st) benchmark::DoNotOptimize(ev.values(t));
}

void BM_spectral_reference(benchmark::State& st)
{
    const SpectralEvaluator ev(packet(), sphere_points(64), 60.0);
    std::vector<double> t(100);
    for (int i = 0; i < 100; ++i) t[i] = 0.6 * i;
    for (auto _ : st) benchmark::DoNotOptimize(ev.values_reference(t));
}

void BM_lse_apply_fft(benchmark::State& st)
{
    set_threads(static_cast<int>(st.range(0)));
    const SpatialGrid g = SpatialGrid::cube(4.0, 12);
    const LseOperator op(g, Potential::gaussian(0.05), 1.0, 1.0);
    std::vector<Spinor4> f(g.size(), Spinor4{{1.0, 0.5, 0.0, 0.25}}), out(g.size());
    for (auto _ : st) {
        op.apply(f, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_lse_apply_direct(benchmark::State& st)
{
    const SpatialGrid g = SpatialGrid::cube(4.0, 12);
    const LseOperator op(g, Potential::gaussian(0.05), 1.0, 1.0);
    std::vector<Spinor4> f(g.size(), Spinor4{{1.0, 0.5, 0.0, 0.25}}), out(g.size());
    for (auto _ : st) {
        op.apply_reference(f, out);
        benchmark::DoNotOptimize(out.data());
    }
}

struct OscFixture {
    PhaseParams p;
    SpinorSamples s;
    OscFixture()
    {
        p.y = {0.6, 0, 0};
        p.mu = 50.0;
        ChiSpec chi;
        chi.center = *k_stationary(p);
        s = sample(statphase_grid(p, chi.center, chi.radius), [&](const Vec3& k) { return chi(k); });
    }
};

void BM_oscillatory(benchmark::State& st)
{
    set_threads(static_cast<int>(st.range(0)));
    static const OscFixture fx;
    for (auto _ : st) benchmark::DoNotOptimize(oscillatory_bruteforce(fx.p, fx.s));
}

void BM_oscillatory_reference(benchmark::State& st)
{
    static const OscFixture fx;
    for (auto _ : st) benchmark::DoNotOptimize(oscillatory_bruteforce_reference(fx.p, fx.s));
}

}  // namespace

BENCHMARK(BM_wave_batch)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_wave_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spectral_values)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spectral_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lse_apply_fft)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lse_apply_direct)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_oscillatory)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_oscillatory_reference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
