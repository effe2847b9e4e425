#pragma once

// Brute-force combinatorial references for the test suite. Everything here is
// deliberately independent of the library's closed-form implementations: the
// counts come from direct enumeration or elementary recurrences only.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "wba/partition.hpp"

namespace testing_oracles {

// Number of integer partitions of n, by the classic two-variable recurrence
// counting partitions of n with largest part at most k.
inline std::int64_t partition_count(int n) {
  if (n < 0) return 0;
  std::vector<std::vector<std::int64_t>> t(n + 1, std::vector<std::int64_t>(n + 1, 0));
  for (int k = 0; k <= n; ++k) t[0][k] = 1;
  for (int m = 1; m <= n; ++m)
    for (int k = 1; k <= n; ++k) t[m][k] = t[m][k - 1] + (m >= k ? t[m - k][k] : 0);
  return t[n][n];
}

// Standard tableaux of a given shape, counted by removing corner boxes one at
// a time (the branching recursion, no hook products involved).
inline std::int64_t count_standard_tableaux(const wba::Partition& mu) {
  static std::map<std::vector<int>, std::int64_t> memo;
  if (mu.weight() <= 1) return 1;
  auto it = memo.find(mu.parts());
  if (it != memo.end()) return it->second;
  std::int64_t total = 0;
  for (const wba::Partition& child : wba::remove_box(mu)) total += count_standard_tableaux(child);
  memo[mu.parts()] = total;
  return total;
}

// Semistandard tableaux with entries in 1..d, by filling cells left to right,
// top to bottom, enforcing weak rows and strict columns directly.
inline std::int64_t count_semistandard_tableaux(const wba::Partition& mu, int d) {
  const auto& parts = mu.parts();
  std::vector<std::vector<int>> fill(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) fill[i].assign(parts[i], 0);

  auto rec = [&](auto&& self, int r, int c) -> std::int64_t {
    if (r == static_cast<int>(parts.size())) return 1;
    int nr = r, nc = c + 1;
    if (nc >= parts[r]) {
      nr = r + 1;
      nc = 0;
    }
    int lo = 1;
    if (c > 0) lo = std::max(lo, fill[r][c - 1]);
    if (r > 0) lo = std::max(lo, fill[r - 1][c] + 1);
    std::int64_t total = 0;
    for (int v = lo; v <= d; ++v) {
      fill[r][c] = v;
      total += self(self, nr, nc);
    }
    fill[r][c] = 0;
    return total;
  };
  if (parts.empty()) return 1;
  return rec(rec, 0, 0);
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed5eedULL);
  return gen;
}

}  // namespace testing_oracles
