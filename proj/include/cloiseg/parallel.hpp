#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cloiseg {

/// Hardware concurrency, at least 1.
inline std::size_t default_thread_count() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// 0 means "use all cores".
inline std::size_t resolve_threads(std::size_t requested) {
  return requested == 0 ? default_thread_count() : requested;
}

/// Runs fn(begin, end) over contiguous chunks of [0, n) on up to `threads`
/// workers. Chunks are claimed dynamically, so callers must write results only
/// into per-index slots; the first exception thrown by any chunk is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn,
                  std::size_t min_chunk = 2048) {
  if (n == 0) return;
  threads = resolve_threads(threads);
  const std::size_t chunk =
      std::max(min_chunk, (n + threads * 8 - 1) / (threads * 8));
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const std::size_t workers = std::min(threads, chunks);
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      try {
        fn(c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(chunks, std::memory_order_relaxed);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace cloiseg
