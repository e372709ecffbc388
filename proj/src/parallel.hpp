#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qlcod::detail {

// Calls fn(i) for i in [0, n) on up to `threads` workers. Each index is
// visited exactly once; results are written by fn into preallocated slots so
// output order never depends on scheduling. fn must not throw.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min<std::size_t>(threads, n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace qlcod::detail
