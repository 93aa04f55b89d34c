#pragma once

#include <cstdint>
#include <functional>

namespace ksat {

// Number of worker threads: min(hardware, KSAT_LAB_THREADS if set).
int thread_budget();

// Runs fn(begin, end) over a partition of [0, n) on the thread budget.
// Chunk boundaries depend only on n and the budget, so any reduction that
// merges per-chunk results in index order is deterministic.
void parallel_chunks(int64_t n,
                     const std::function<void(int64_t, int64_t, int chunk)> &fn);

} // namespace ksat
