#pragma once

// Deterministic fan-out over independent work items.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kanset {

/// Process-wide worker count; 0 means hardware concurrency.
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> threads{1};
  return threads;
}

inline unsigned worker_count() {
  unsigned t = thread_setting().load();
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

inline void set_threads(unsigned t) { thread_setting().store(t); }

/// Calls fn(i) for every i in [0, n). Work is claimed dynamically, so callers
/// write results into slot i and merge in index order. The exception thrown
/// for the smallest index is rethrown, which keeps failures deterministic too.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kanset
