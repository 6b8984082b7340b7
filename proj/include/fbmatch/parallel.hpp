#pragma once

#include <functional>

namespace fbmatch {

// Caps worker threads for all parallel loops. 0 restores auto
// (hardware concurrency, or the FBMATCH_THREADS env var if set).
void set_max_threads(int n);

// Effective worker count after the cap / env var are applied.
int worker_count();

// Runs fn(i) for i in [begin, end) across workers. The range is split
// into one contiguous chunk per worker, so splitting never depends on
// timing and results are reproducible for any thread count.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace fbmatch
