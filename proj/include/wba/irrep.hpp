#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wba/partition.hpp"
#include "wba/permutation.hpp"

namespace wba {

// Chain of diagrams (1) = mu^(1) < mu^(2) < ... < mu^(p) growing one box per
// step; indexes one basis vector of the orthogonal irrep of shape mu^(p).
struct BranchPath {
  std::vector<Partition> chain;

  const Partition& shape() const { return chain.back(); }
  const Partition& penultimate() const {
    if (chain.size() < 2) throw std::logic_error("path too short for a penultimate shape");
    return chain[chain.size() - 2];
  }

  friend bool operator==(const BranchPath& a, const BranchPath& b) { return a.chain == b.chain; }
  friend bool operator!=(const BranchPath& a, const BranchPath& b) { return !(a == b); }
  friend bool operator<(const BranchPath& a, const BranchPath& b) { return a.chain < b.chain; }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (i) s += "<";
      s += chain[i].to_string();
    }
    return s;
  }
};

// Reading direction of the branching chain over the p letters: LeftToRight
// restricts along subgroups fixing the trailing letters (the chain peels
// letter p first), RightToLeft along subgroups fixing the leading letters.
enum class Orientation { LeftToRight, RightToLeft };

inline const char* to_string(Orientation o) {
  return o == Orientation::LeftToRight ? "LR" : "RL";
}

namespace detail {

inline std::vector<BranchPath> build_paths(const Partition& mu) {
  if (mu.weight() == 1) return {BranchPath{{mu}}};
  std::vector<Partition> children = remove_box(mu);
  std::sort(children.begin(), children.end());  // canonical block order
  std::vector<BranchPath> out;
  for (const Partition& alpha : children)
    for (BranchPath q : build_paths(alpha)) {
      q.chain.push_back(mu);
      out.push_back(std::move(q));
    }
  return out;
}

// Row and column (1-based) of the box added between two consecutive shapes.
inline std::pair<int, int> added_box(const Partition& small, const Partition& big) {
  for (int i = 1; i <= big.height(); ++i)
    if (big.row(i) != small.row(i)) return {i, big.row(i)};
  throw std::logic_error("shapes do not differ by a box");
}

}  // namespace detail

// Orthogonal irrep of the symmetric group on weight(mu) letters in the Young
// orthogonal form, rows and columns indexed by branch paths grouped by their
// penultimate shape (canonical block order). Matrices for arbitrary group
// elements are products of the adjacent-transposition generators, built from
// the axial-distance rule, and are memoized.
class IrrepTable {
 public:
  IrrepTable(Partition mu, Orientation orient) : mu_(std::move(mu)), orient_(orient) {
    p_ = mu_.weight();
    if (p_ < 1) throw std::invalid_argument("empty shape");
    if (p_ > 8) throw std::invalid_argument("group too large");
    paths_ = detail::build_paths(mu_);
    dim_ = static_cast<int>(paths_.size());
    for (int t = 0; t < dim_; ++t) path_lookup_[paths_[t]] = t;

    // contents_[t][k] = column - row of the box a path adds at step k+1.
    contents_.assign(dim_, std::vector<int>(p_));
    boxes_.assign(dim_, std::vector<std::pair<int, int>>(p_));
    for (int t = 0; t < dim_; ++t) {
      boxes_[t][0] = {1, 1};
      contents_[t][0] = 0;
      for (int k = 1; k < p_; ++k) {
        auto rc = detail::added_box(paths_[t].chain[k - 1], paths_[t].chain[k]);
        boxes_[t][k] = rc;
        contents_[t][k] = rc.second - rc.first;
      }
    }

    gen_.reserve(p_ > 1 ? p_ - 1 : 0);
    for (int k = 1; k <= p_ - 1; ++k) gen_.push_back(build_generator(k));
  }

  const Partition& shape() const { return mu_; }
  Orientation orientation() const { return orient_; }
  int letters() const { return p_; }
  int dimension() const { return dim_; }
  const std::vector<BranchPath>& paths() const { return paths_; }

  // 1-based path index.
  int path_index(const BranchPath& path) const {
    auto it = path_lookup_.find(path);
    if (it == path_lookup_.end()) throw std::invalid_argument("foreign path");
    return it->second + 1;
  }

  const BranchPath& index_path(int i) const {
    if (i < 1 || i > dim_) throw std::out_of_range("path index out of range");
    return paths_[i - 1];
  }

  // Contiguous 1-based index range [first, last] of paths whose penultimate
  // shape is alpha; empty shapes yield (0, -1).
  std::pair<int, int> block_range(const Partition& alpha) const {
    int first = 0, last = -1;
    for (int t = 0; t < dim_; ++t) {
      if (p_ >= 2 && paths_[t].penultimate() == alpha) {
        if (first == 0) first = t + 1;
        last = t + 1;
      }
    }
    return {first, last};
  }

  // Splits a 1-based path index into (penultimate shape, position in block).
  std::pair<Partition, int> path_pair(int i) const {
    const BranchPath& path = index_path(i);
    auto [first, last] = block_range(path.penultimate());
    return {path.penultimate(), i - first + 1};
  }

  const Eigen::MatrixXd& matrix(const Permutation& sigma) const {
    if (sigma.degree() != p_) throw std::invalid_argument("degree mismatch");
    Permutation key = orient_ == Orientation::LeftToRight
                          ? sigma
                          : Permutation::reversal(p_) * sigma * Permutation::reversal(p_);
    std::lock_guard<std::mutex> lock(cache_lock_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim_, dim_);
    for (int i : key.adjacent_word()) m = m * gen_[i - 1];
    return cache_.emplace(std::move(key), std::move(m)).first->second;
  }

 private:
  Eigen::MatrixXd build_generator(int k) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int t = 0; t < dim_; ++t) {
      int rho = contents_[t][k] - contents_[t][k - 1];  // axial distance
      if (rho == 1 || rho == -1) {
        m(t, t) = rho;  // boxes k,k+1 share a row (+1) or a column (-1)
        continue;
      }
      // Exchange the order the two boxes are added; the partner is standard.
      // Only the shape after step k changes: it becomes the shape after step
      // k-1 plus the box this path adds at step k+1. Distance >= 2 forces
      // k >= 2 here, since the first two boxes are always adjacent to (1,1).
      BranchPath swapped = paths_[t];
      int r2 = boxes_[t][k].first;
      std::vector<int> parts = swapped.chain[k - 2].parts();
      if (r2 <= static_cast<int>(parts.size()))
        parts[r2 - 1] += 1;
      else
        parts.push_back(1);
      swapped.chain[k - 1] = Partition(parts);
      int u = path_lookup_.at(swapped);
      double inv = 1.0 / rho;
      m(t, t) = inv;
      m(u, t) = std::sqrt(1.0 - inv * inv);
    }
    return m;
  }

  Partition mu_;
  Orientation orient_;
  int p_ = 0, dim_ = 0;
  std::vector<BranchPath> paths_;
  std::map<BranchPath, int> path_lookup_;
  std::vector<std::vector<int>> contents_;
  std::vector<std::vector<std::pair<int, int>>> boxes_;
  std::vector<Eigen::MatrixXd> gen_;
  mutable std::map<Permutation, Eigen::MatrixXd> cache_;
  mutable std::mutex cache_lock_;
};

// Shared, lazily built table for (shape, orientation).
inline std::shared_ptr<const IrrepTable> young_yamanouchi(const Partition& mu,
                                                          Orientation orient) {
  static std::mutex lock;
  static std::map<std::pair<std::vector<int>, Orientation>, std::shared_ptr<const IrrepTable>>
      registry;
  std::lock_guard<std::mutex> guard(lock);
  auto key = std::make_pair(mu.parts(), orient);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  auto table = std::make_shared<const IrrepTable>(mu, orient);
  registry.emplace(std::move(key), table);
  return table;
}

}  // namespace wba
