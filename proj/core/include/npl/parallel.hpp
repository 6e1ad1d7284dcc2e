#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace npl {

/// Number of workers used when a caller passes 0.
inline unsigned default_worker_count() {
  return std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
}

/// Runs fn(i) for i in [0, count) on at most `workers` threads. Each index is
/// handed out exactly once; the first exception thrown by any task is
/// rethrown after all workers have stopped.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = default_worker_count();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace npl
