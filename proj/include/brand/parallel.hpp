#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace brand {

// Runs fn(i) for i in [0, n) across at most num_threads workers. Each index
// runs exactly once; callers must write results into per-index slots so the
// outcome is identical to a serial loop. num_threads <= 1 runs inline.
// The first exception thrown by any fn is rethrown on the calling thread.
void parallel_for(std::size_t n, int num_threads,
                  const std::function<void(std::size_t)>& fn);

// Number of hardware threads, at least 1.
int default_thread_count();

}  // namespace brand
