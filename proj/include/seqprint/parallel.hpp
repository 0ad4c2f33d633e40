#pragma once

#include <cstddef>
#include <functional>

namespace seqprint {

// Worker count: SEQPRINT_THREADS when set to a positive integer, otherwise
// std::thread::hardware_concurrency() (at least 1).
unsigned thread_count();

// Overrides the environment for the current process; 0 restores it.
void set_thread_count(unsigned threads);

// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
// depend only on n and the worker count, and callers must write results into
// per-index slots so the outcome is schedule-independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace seqprint
