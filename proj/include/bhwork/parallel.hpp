#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace bhwork {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Split [0, count) into contiguous chunks, one per worker. fn(chunk, begin,
/// end) runs on its own thread; the first worker exception is rethrown after
/// all workers join. Aggregation stays deterministic because chunk boundaries
/// depend only on (count, threads).
inline void parallel_chunks(long long count, int threads,
                            const std::function<void(int, long long, long long)>& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 2) {
    fn(0, 0, count);
    return;
  }
  if (static_cast<long long>(threads) > count) threads = static_cast<int>(count);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const long long chunk = (count + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const long long begin = w * chunk;
    const long long end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        if (begin < end) fn(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bhwork
