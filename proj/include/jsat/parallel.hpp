#ifndef JSAT_PARALLEL_HPP
#define JSAT_PARALLEL_HPP

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace jsat {

// Run fn(i) for i in [0, n) across up to `threads` workers on fixed
// contiguous chunks. Each item's work is independent, so the outcome does not
// depend on the thread count. The first exception thrown by a worker is
// rethrown on the calling thread after all workers finish.
template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
  if (n <= 0) return;
  const std::int64_t workers =
      std::max<std::int64_t>(1, std::min<std::int64_t>(threads, n));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::int64_t t = 0; t < workers; ++t) {
    const std::int64_t begin = n * t / workers;
    const std::int64_t end = n * (t + 1) / workers;
    pool.emplace_back([begin, end, &fn, &first_error, &error_mutex] {
      try {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace jsat

#endif
