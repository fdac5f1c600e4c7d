#pragma once

#include <cstddef>
#include <functional>

namespace sburg {

// Number of worker threads: SBURG_THREADS if set, else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks across
// workers; fn(i) must only write to state owned by index i, which keeps
// every reduction deterministic no matter how blocks are scheduled.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace sburg
