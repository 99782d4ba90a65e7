#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ovlq {

inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [begin, end) on `threads` workers. Work is handed out
// in index blocks from an atomic cursor; fn must depend only on i (and write
// only to slot i of shared output), which keeps results independent of the
// schedule. The first exception thrown by any worker is rethrown.
inline void parallel_for(std::int64_t begin, std::int64_t end, int threads,
                         const std::function<void(std::int64_t)>& fn) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  threads = resolve_threads(threads);
  if (threads == 1 || count == 1) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
    return;
  }

  const std::int64_t block =
      std::max<std::int64_t>(1, count / (static_cast<std::int64_t>(threads) * 8));
  std::atomic<std::int64_t> cursor{begin};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::int64_t lo = cursor.fetch_add(block);
      if (lo >= end || failed.load(std::memory_order_relaxed)) return;
      const std::int64_t hi = std::min(end, lo + block);
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ovlq
