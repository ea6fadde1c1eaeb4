#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace trajevo {

// Apply `fn` to indices [0, n) on up to `workers` threads and collect results
// in input order. Results land in a pre-sized vector slot per index, so output
// order never depends on scheduling. `fn` must not throw (wrap fallible work
// in a result type).
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t n, std::size_t workers, Fn&& fn) {
  std::vector<Result> results(n);
  if (n == 0) return results;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  if (workers > n) workers = n;
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        results[i] = fn(i);
      }
    });
  }
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace trajevo
