#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace scrambler {

// Runs work(i) for i in [0, n) across `threads` workers and merges results in
// index order, so reductions are independent of the thread count.
template <typename Item>
void parallel_ordered(uint64_t n, uint32_t threads,
                      const std::function<Item(uint64_t)>& work,
                      const std::function<void(uint64_t, Item&&)>& merge) {
  if (threads <= 1 || n <= 1) {
    for (uint64_t i = 0; i < n; ++i) merge(i, work(i));
    return;
  }
  std::mutex mu;
  std::condition_variable cv;
  uint64_t next_to_run = 0;
  uint64_t next_to_merge = 0;
  auto body = [&] {
    while (true) {
      uint64_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next_to_run >= n) return;
        i = next_to_run++;
      }
      Item item = work(i);
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return next_to_merge == i; });
      merge(i, std::move(item));
      ++next_to_merge;
      cv.notify_all();
    }
  };
  std::vector<std::thread> pool;
  for (uint32_t t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
}

uint32_t resolve_threads(uint32_t requested);

}  // namespace scrambler
