#ifndef QUANTLAB_PARALLEL_HPP_
#define QUANTLAB_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace quantlab {

/// Worker count: explicit request, else QUANTLAB_THREADS, else hardware.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QUANTLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs fn(task) for task in [0, n_tasks) on `workers` threads. Tasks are
/// handed out dynamically, so callers must make results depend only on the
/// task index. The first exception thrown by any task is rethrown.
template <class Fn>
void parallel_for(std::size_t n_tasks, int workers, Fn&& fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(n_tasks, 1))));
  if (workers == 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!stop.load(std::memory_order_relaxed)) {
        const std::size_t t = next.fetch_add(1);
        if (t >= n_tasks) return;
        try {
          fn(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          stop = true;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace quantlab

#endif  // QUANTLAB_PARALLEL_HPP_
