#pragma once

#include <cstddef>
#include <functional>

namespace tsc {

// Thread count resolution: TSC_THREADS env var wins, then the value set via
// set_thread_count (CLI --threads), then hardware concurrency. 0 means auto.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous index ranges so
// each iteration writes only its own slot; callers do any cross-slot
// reduction serially afterwards, which keeps results independent of the
// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tsc
