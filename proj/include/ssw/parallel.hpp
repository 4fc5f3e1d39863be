#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace ssw {

// Runs fn(lo, hi) over a partition of [0, n). Callers must guarantee the
// combined result does not depend on the partition, so any thread count
// (including 1) produces bitwise-identical output.
inline void parallel_chunks(
    std::ptrdiff_t n, int threads,
    const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& fn) {
  const std::ptrdiff_t min_chunk = 1024;
  if (threads <= 1 || n < 2 * min_chunk) {
    fn(0, n);
    return;
  }
  const int t = static_cast<int>(std::min<std::ptrdiff_t>(
      threads, (n + min_chunk - 1) / min_chunk));
  const std::ptrdiff_t chunk = (n + t - 1) / t;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  for (int k = 0; k < t; ++k) {
    const std::ptrdiff_t lo = k * chunk;
    const std::ptrdiff_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace ssw
