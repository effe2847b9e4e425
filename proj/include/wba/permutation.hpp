#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace wba {

// Element of the symmetric group on {1..p}, stored as the one-line image list.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size(), false);
    for (int v : img_) {
      if (v < 1 || v > static_cast<int>(img_.size()) || seen[v - 1])
        throw std::invalid_argument("images must be a bijection on 1..p");
      seen[v - 1] = true;
    }
  }

  static Permutation identity(int p) {
    std::vector<int> img(p);
    std::iota(img.begin(), img.end(), 1);
    return Permutation(std::move(img));
  }

  static Permutation transposition(int p, int a, int b) {
    if (a < 1 || b < 1 || a > p || b > p) throw std::invalid_argument("transposition out of range");
    Permutation s = identity(p);
    std::swap(s.img_[a - 1], s.img_[b - 1]);
    return s;
  }

  // The involution k -> p+1-k.
  static Permutation reversal(int p) {
    std::vector<int> img(p);
    for (int k = 1; k <= p; ++k) img[k - 1] = p + 1 - k;
    return Permutation(std::move(img));
  }

  int degree() const { return static_cast<int>(img_.size()); }
  int operator()(int k) const { return img_[k - 1]; }
  const std::vector<int>& images() const { return img_; }

  // Composition acts on points right-to-left: (s*t)(x) = s(t(x)).
  Permutation operator*(const Permutation& t) const {
    if (degree() != t.degree()) throw std::invalid_argument("degree mismatch");
    std::vector<int> img(degree());
    for (int x = 1; x <= degree(); ++x) img[x - 1] = img_[t(x) - 1];
    return Permutation(std::move(img));
  }

  Permutation inverse() const {
    std::vector<int> img(degree());
    for (int x = 1; x <= degree(); ++x) img[img_[x - 1] - 1] = x;
    return Permutation(std::move(img));
  }

  int cycle_count() const {
    std::vector<bool> seen(degree(), false);
    int c = 0;
    for (int x = 1; x <= degree(); ++x) {
      if (seen[x - 1]) continue;
      ++c;
      for (int y = x; !seen[y - 1]; y = img_[y - 1]) seen[y - 1] = true;
    }
    return c;
  }

  bool is_identity() const {
    for (int x = 1; x <= degree(); ++x)
      if (img_[x - 1] != x) return false;
    return true;
  }

  // Writes this permutation as a product of adjacent transpositions s_i=(i,i+1):
  // the returned list [i1,...,ik] satisfies s_{i1}*...*s_{ik} = *this under the
  // composition convention above. Obtained by bubble-sorting the one-line form;
  // each position swap multiplies by s_i on the right, so the record reverses.
  std::vector<int> adjacent_word() const {
    std::vector<int> line = img_, word;
    bool moved = true;
    while (moved) {
      moved = false;
      for (int i = 0; i + 1 < degree(); ++i) {
        if (line[i] > line[i + 1]) {
          std::swap(line[i], line[i + 1]);
          word.push_back(i + 1);
          moved = true;
        }
      }
    }
    std::reverse(word.begin(), word.end());
    return word;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.img_ == b.img_; }
  friend bool operator!=(const Permutation& a, const Permutation& b) { return !(a == b); }
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.img_ < b.img_; }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < degree(); ++i) {
      if (i) s += " ";
      s += std::to_string(img_[i]);
    }
    return s + "]";
  }

 private:
  std::vector<int> img_;
};

// All p! elements in lexicographic one-line order. Guarded smallness keeps the
// dense tables downstream within memory.
inline std::vector<Permutation> enumerate_group(int p) {
  if (p < 1) throw std::invalid_argument("degree must be positive");
  if (p > 8) throw std::invalid_argument("group too large");
  std::vector<int> img(p);
  std::iota(img.begin(), img.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

}  // namespace wba
