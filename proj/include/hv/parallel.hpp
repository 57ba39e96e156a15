#pragma once

#include <cstddef>
#include <functional>
#include <mutex>

namespace hv {

// Worker count: THREADS env var if set, else hardware concurrency.
int thread_count();

// Runs f(i) for i in [0, n). Each index is handled by exactly one worker, so
// per-index writes are deterministic regardless of thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

// FFTW planning and plan destruction are not thread-safe; all callers share this lock.
std::mutex& fftw_planner_mutex();

}  // namespace hv
