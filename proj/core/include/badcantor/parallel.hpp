#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace badcantor {

namespace detail {
inline thread_local bool in_worker = false;
}

/// Runs f(i) for i in [0, n); results must be written to per-index slots by the caller.
/// Nested calls from a worker run serially.
template <class F>
void parallel_for(std::size_t n, F&& f, unsigned max_threads = 0) {
  unsigned hw = std::thread::hardware_concurrency();
  unsigned threads = max_threads ? max_threads : (hw ? hw : 1);
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (detail::in_worker) threads = 1;
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      detail::in_worker = true;
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace badcantor
