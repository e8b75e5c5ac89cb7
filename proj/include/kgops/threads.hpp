#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace kgops {

// Worker count for node-parallel loops, from the KGOPS_THREADS environment
// variable. Defaults to 1; results are bitwise independent of the setting
// because parallel loops only do disjoint per-node writes.
inline int configured_threads() {
  static const int n = [] {
    const char* env = std::getenv("KGOPS_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
  }();
  return n;
}

template <typename F>
void parallel_for(std::size_t count, const F& body) {
  const int workers = configured_threads();
  if (workers <= 1 || count < 1024) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace kgops
