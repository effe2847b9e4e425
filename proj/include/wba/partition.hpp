#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wba/util.hpp"

namespace wba {

// Young diagram: weakly decreasing list of positive row lengths.
// The canonical enumeration order used for every index set in the library is
// lexicographically decreasing on parts, so (3) precedes (2,1) precedes (1,1,1).
// operator< returns "comes earlier in canonical order".
class Partition {
 public:
  Partition() = default;  // the empty diagram of weight 0

  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw std::invalid_argument("partition parts must be non-increasing");
    }
  }

  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  const std::vector<int>& parts() const { return parts_; }
  int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
  int height() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }

  // Row length, 1-based; rows past the bottom have length 0.
  int row(int i) const { return (i >= 1 && i <= height()) ? parts_[i - 1] : 0; }

  // Column height, 1-based (length of column j of the diagram).
  int col(int j) const {
    int h = 0;
    while (h < height() && parts_[h] >= j) ++h;
    return h;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
  friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }

  // Canonical precedence: lexicographically larger part lists come first.
  friend bool operator<(const Partition& a, const Partition& b) {
    return std::lexicographical_compare(b.parts_.begin(), b.parts_.end(), a.parts_.begin(),
                                        a.parts_.end());
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts_[i]);
    }
    return s + ")";
  }

  // Hook length of cell (i,j), 1-based: arm + leg + 1.
  int hook(int i, int j) const { return row(i) - j + col(j) - i + 1; }

  // Number of standard tableaux of this shape: p! / (product of hooks).
  std::int64_t irrep_dimension() const {
    std::int64_t hooks = 1;
    for (int i = 1; i <= height(); ++i)
      for (int j = 1; j <= row(i); ++j) hooks *= hook(i, j);
    return factorial(weight()) / hooks;
  }

  // Hook-content count of semistandard tableaux with entries <= d: the
  // multiplicity of this irrep in the d-dimensional tensor power. Zero exactly
  // when the diagram is taller than d.
  std::int64_t multiplicity(int d) const {
    if (height() > d) return 0;
    std::int64_t num = 1, den = 1;
    for (int i = 1; i <= height(); ++i)
      for (int j = 1; j <= row(i); ++j) {
        num *= d + j - i;
        den *= hook(i, j);
        std::int64_t g = std::gcd(num, den);
        num /= g;
        den /= g;
      }
    return num / den;
  }

 private:
  std::vector<int> parts_;
};

// All partitions of weight p in canonical (lexicographically decreasing) order.
inline std::vector<Partition> enumerate_partitions(int p) {
  if (p <= 0) throw std::invalid_argument("empty weight");
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int cap) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int first = std::min(cap, remaining); first >= 1; --first) {
      cur.push_back(first);
      self(self, remaining - first, first);
      cur.pop_back();
    }
  };
  rec(rec, p, p);
  return out;
}

// Diagrams reachable by adding one corner box, listed top row first.
// Top-down row order coincides with canonical order here.
inline std::vector<Partition> add_box(const Partition& mu) {
  std::vector<Partition> out;
  int h = mu.height();
  for (int i = 1; i <= h + 1; ++i) {
    if (i == 1 || mu.row(i) < mu.row(i - 1)) {
      std::vector<int> parts = mu.parts();
      if (i <= h)
        parts[i - 1] += 1;
      else
        parts.push_back(1);
      out.emplace_back(std::move(parts));
    }
  }
  return out;
}

// Diagrams reachable by removing one corner box, listed top row first.
// Note this is the reverse of canonical order: (3,1) gives [(2,1), (3)].
inline std::vector<Partition> remove_box(const Partition& mu) {
  std::vector<Partition> out;
  int h = mu.height();
  for (int i = 1; i <= h; ++i) {
    if (mu.row(i) > mu.row(i + 1)) {
      std::vector<int> parts = mu.parts();
      parts[i - 1] -= 1;
      if (parts[i - 1] == 0) parts.erase(parts.begin() + (i - 1));
      out.emplace_back(std::move(parts));
    }
  }
  return out;
}

// Children shared by both diagrams (one box below each), canonical order.
inline std::vector<Partition> common_children(const Partition& mu, const Partition& nu) {
  if (mu.weight() != nu.weight()) throw std::invalid_argument("weight mismatch");
  std::vector<Partition> a = remove_box(mu), b = remove_box(nu), out;
  for (const Partition& t : a)
    if (std::find(b.begin(), b.end(), t) != b.end()) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

// True when mu != nu and the two diagrams share exactly one child.
inline bool box_related(const Partition& mu, const Partition& nu) {
  if (mu.weight() != nu.weight()) throw std::invalid_argument("weight mismatch");
  if (mu == nu) return false;
  return common_children(mu, nu).size() == 1;
}

// The unique shared child when box_related holds.
inline std::optional<Partition> common_child(const Partition& mu, const Partition& nu) {
  if (mu.weight() != nu.weight()) throw std::invalid_argument("weight mismatch");
  if (mu == nu) return std::nullopt;
  auto c = common_children(mu, nu);
  if (c.size() != 1) return std::nullopt;
  return c.front();
}

}  // namespace wba
