#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rmt::detail {

// Runs job(k) for k in [0, count) on `workers` threads. Each job owns its output slot.
template <class Job>
inline void parallel_for(int count, int workers, Job const &job)
{
  if (workers <= 0) { workers = std::max(1u, std::thread::hardware_concurrency()); }
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int k = 0; k < count; ++k) { job(k); }
    return;
  }
  std::atomic<int>         next{0};
  std::exception_ptr       failure;
  std::atomic<bool>        failed{false};
  std::vector<std::thread> pool;
  std::mutex               lock;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int k = next++; k < count && !failed; k = next++) {
        try {
          job(k);
        } catch (...) {
          std::lock_guard guard(lock);
          if (!failed.exchange(true)) { failure = std::current_exception(); }
        }
      }
    });
  }
  for (auto &t : pool) { t.join(); }
  if (failure) { std::rethrow_exception(failure); }
}

} // namespace rmt::detail
