#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace isolab {

/// Static-chunk parallel map over [begin, end). Results must be written to
/// preallocated slots indexed by the loop variable so output order (and the
/// bytes written downstream) never depends on the thread count.
inline void parallel_for(int begin, int end, int threads,
                         const std::function<void(int)>& body) {
  const int count = end - begin;
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  const int workers = std::min(threads, count);
  std::atomic<int> next(begin);
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= end) return;
        try {
          body(i);
        } catch (...) {
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace isolab
