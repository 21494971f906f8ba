// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
//! Thread budget and deterministic parallel loops.
//!
//! Reductions split the index range into fixed-size blocks whose partial
//! sums are combined in block order, so results depend on the data only and
//! never on the number of threads.
#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dfl/quadrature.hpp"

namespace dfl {

void set_threads(int n);
int threads();

inline constexpr std::size_t reduction_block = 256;

//! Holds the first exception thrown inside a parallel region so it can be
//! rethrown on the calling thread.
class ExceptionSlot {
  public:
    template<class F>
    void run(F&& f) noexcept
    {
        try {
            f();
        } catch (...) {
#pragma omp critical(dfl_exception_slot)
            if (!first_) first_ = std::current_exception();
        }
    }
    void rethrow() const
    {
        if (first_) std::rethrow_exception(first_);
    }

  private:
    std::exception_ptr first_;
};

template<class F>
void parallel_for(std::size_t n, F&& body)
{
    const long long count = static_cast<long long>(n);
    ExceptionSlot slot;
#pragma omp parallel for schedule(static) num_threads(threads())
    for (long long i = 0; i < count; ++i) slot.run([&] { body(static_cast<std::size_t>(i)); });
    slot.rethrow();
}

//! Dynamic schedule for loops whose iterations differ strongly in cost.
template<class F>
void parallel_for_dynamic(std::size_t n, F&& body)
{
    const long long count = static_cast<long long>(n);
    ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads())
    for (long long i = 0; i < count; ++i) slot.run([&] { body(static_cast<std::size_t>(i)); });
    slot.rethrow();
}

//! Sum of term(i) for i < n. `T` needs `+=` and value-initialisation.
template<class T, class F>
T blocked_sum(std::size_t n, F&& term)
{
    const std::size_t nb = (n + reduction_block - 1) / reduction_block;
    std::vector<T> partial(nb, T{});
    parallel_for(nb, [&](std::size_t b) {
        const std::size_t lo = b * reduction_block;
        const std::size_t hi = std::min(n, lo + reduction_block);
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[b] = acc;
    });
    T total{};
    for (const T& p : partial) total += p;
    return total;
}

}  // namespace dfl
