#pragma once

#include <cstddef>
#include <functional>

namespace burstacc {

// Worker count: hardware concurrency capped by the BURSTACC_THREADS
// environment variable (values < 1 mean serial).
int worker_count();

// Runs fn(i) for i in [0, n). Items must write disjoint state; the call
// returns after all items finish. Falls back to a serial loop for small n
// or a single worker, so results never depend on thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace burstacc
