#pragma once

#include <cstddef>
#include <functional>

namespace interplab {

// Number of worker threads: INTERPLAB_THREADS if set (>=1), else the
// hardware concurrency.
int thread_budget();

// Runs fn(i) for every i in [0, count).  Work is split into contiguous
// index ranges; callers write results by index into pre-sized storage and
// reduce sequentially afterwards, so results never depend on the thread
// count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace interplab
