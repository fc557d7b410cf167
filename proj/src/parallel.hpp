#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace swlog::detail {

// Runs compute(j) for j in [0, count), possibly on several threads, and
// feeds the results to consume(j, result) in ascending j. The reduction
// order is fixed, so outputs never depend on the worker count or on thread
// scheduling. Work proceeds in blocks to bound the number of results held.
template <typename Result, typename Compute, typename Consume>
void for_each_trajectory_ordered(std::size_t count, unsigned workers,
                                 Compute&& compute, Consume&& consume) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t j = 0; j < count; ++j) consume(j, compute(j));
    return;
  }
  const std::size_t block = static_cast<std::size_t>(workers) * 4;
  std::vector<std::optional<Result>> slots(block);
  std::vector<std::exception_ptr> failures(block);
  for (std::size_t start = 0; start < count; start += block) {
    const std::size_t end = std::min(count, start + block);
    std::atomic<std::size_t> cursor{start};
    auto run = [&] {
      for (;;) {
        std::size_t j = cursor.fetch_add(1);
        if (j >= end) break;
        try {
          slots[j - start].emplace(compute(j));
        } catch (...) {
          failures[j - start] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    for (std::size_t j = start; j < end; ++j) {
      if (failures[j - start]) std::rethrow_exception(failures[j - start]);
      consume(j, std::move(*slots[j - start]));
      slots[j - start].reset();
    }
  }
}

}  // namespace swlog::detail
