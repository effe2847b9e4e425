#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace wba {

inline std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Thread cap: WBA_THREADS if set, else hardware concurrency, at least 1.
inline int thread_budget() {
  if (const char* env = std::getenv("WBA_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Chunked parallel loop over [0, n). Each index is visited exactly once and
// writes only to its own outputs, so results do not depend on the thread count.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  int nt = thread_budget();
  if (nt <= 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (nt > n) nt = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::int64_t chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    std::int64_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::int64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace wba
