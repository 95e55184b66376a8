#pragma once
#include <cstddef>
#include <functional>

namespace soras {

// Process-wide cap on worker threads. 0 means "use hardware concurrency".
// Reads the SORAS_LAB_THREADS environment variable on first use.
void set_thread_cap(unsigned cap);
unsigned thread_cap();

// Runs fn(begin, end) over a fixed chunked partition of [0, n).
// The partition depends only on n and the thread cap, and every index is
// handled by exactly one worker, so results that write to disjoint slots
// are bitwise independent of the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace soras
