#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qps {

/// Thread budget from QPS_THREADS; 0 or unset means hardware concurrency.
inline unsigned thread_budget_from_env() {
  unsigned requested = 0;
  if (const char* env = std::getenv("QPS_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) requested = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      requested = 0;
    }
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

/**
 * Calls fn(i) for i in [0, count), splitting contiguous blocks over up to
 * `threads` workers. Results must be written to per-index slots by fn, so the
 * outcome does not depend on scheduling. The first exception is rethrown.
 */
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(count, lo + block);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qps
