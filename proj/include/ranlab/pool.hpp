#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ranlab {

// Runs fn(0..n-1) on up to `jobs` workers. Tasks must be pure with respect
// to shared state; results are stored by index on the caller side, so the
// outcome is identical for any pool size.
inline void run_indexed(int n, int jobs, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (jobs < 1) throw std::invalid_argument("run_indexed: jobs < 1");
  const int workers = std::min(jobs, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ranlab
