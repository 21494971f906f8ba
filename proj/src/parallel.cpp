// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/parallel.hpp"

#include <atomic>

namespace dfl {

namespace {

std::atomic<int> budget{0};

}  // namespace

void set_threads(int n) { budget.store(n > 0 ? n : 0); }

int threads()
{
    const int n = budget.load();
    if (n > 0) return n;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace dfl
