#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "wba/dense_operator.hpp"
#include "wba/irrep.hpp"
#include "wba/oracle.hpp"
#include "wba/partition.hpp"
#include "wba/permutation.hpp"
#include "wba/report.hpp"

namespace wba {

// Label of one irreducible matrix unit of the group algebra on weight(mu)
// letters: shape, row path, column path, and the branching direction.
struct UnitLabel {
  Partition mu;
  BranchPath row, col;
  Orientation orient = Orientation::LeftToRight;

  int weight() const { return mu.weight(); }

  friend bool operator==(const UnitLabel& a, const UnitLabel& b) {
    return a.mu == b.mu && a.row == b.row && a.col == b.col && a.orient == b.orient;
  }
  friend bool operator<(const UnitLabel& a, const UnitLabel& b) {
    auto key = [](const UnitLabel& u) { return std::tie(u.mu, u.row, u.col, u.orient); };
    return key(a) < key(b);
  }

  std::string to_string() const {
    return std::string("E[") + mu.to_string() + ";" + row.to_string() + ";" + col.to_string() +
           ";" + wba::to_string(orient) + "]";
  }
};

inline UnitLabel unit_label(const Partition& mu, int i, int j,
                            Orientation orient = Orientation::LeftToRight) {
  auto table = young_yamanouchi(mu, orient);
  return UnitLabel{mu, table->index_path(i), table->index_path(j), orient};
}

// Every unit label of the group algebra on p letters: shapes in canonical
// order, row-major over path indices.
inline std::vector<UnitLabel> unit_labels(int p, Orientation orient = Orientation::LeftToRight) {
  std::vector<UnitLabel> out;
  for (const Partition& mu : enumerate_partitions(p)) {
    auto table = young_yamanouchi(mu, orient);
    for (int i = 1; i <= table->dimension(); ++i)
      for (int j = 1; j <= table->dimension(); ++j)
        out.push_back(UnitLabel{mu, table->index_path(i), table->index_path(j), orient});
  }
  return out;
}

// The irreducible matrix unit as a dense operator on (C^d)^(tensor p):
// (dim(mu)/p!) * sum over the group of [row,col] entries of the inverse
// element times the slot permutation operator. Vanishes when the diagram is
// taller than d. Results are cached; the returned reference stays valid for
// the program lifetime.
inline const DenseOperator& matrix_unit(const UnitLabel& label, int d) {
  using Key = std::tuple<int, std::vector<int>, int, int, Orientation>;
  static std::mutex lock;
  static std::map<Key, std::unique_ptr<const DenseOperator>> cache;

  auto table = young_yamanouchi(label.mu, label.orient);
  int i = table->path_index(label.row), j = table->path_index(label.col);
  Key key{d, label.mu.parts(), i, j, label.orient};

  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  int p = label.weight();
  DenseOperator acc = DenseOperator::zero(d, p);
  double prefactor = static_cast<double>(table->dimension()) / factorial(p);
  for (const Permutation& sigma : enumerate_group(p)) {
    double coeff = table->matrix(sigma.inverse())(j - 1, i - 1);
    if (coeff == 0.0) continue;
    acc = acc + (prefactor * coeff) * perm_operator(sigma, d, p);
  }
  auto owned = std::make_unique<const DenseOperator>(std::move(acc));
  const DenseOperator& ref = *owned;
  cache.emplace(std::move(key), std::move(owned));
  return ref;
}

inline const DenseOperator& matrix_unit(const Partition& mu, int i, int j, int d,
                                        Orientation orient = Orientation::LeftToRight) {
  return matrix_unit(unit_label(mu, i, j, orient), d);
}

// Coefficients of a slot permutation over the matrix-unit basis: the operator
// equals the sum of phi^mu_ij(sigma) times the (mu,i,j) unit.
struct UnitCoefficient {
  Partition mu;
  int i = 0, j = 0;
  double value = 0.0;
};

inline std::vector<UnitCoefficient> expand_permutation(const Permutation& sigma, int p) {
  if (sigma.degree() != p) throw std::invalid_argument("degree mismatch");
  std::vector<UnitCoefficient> out;
  for (const Partition& mu : enumerate_partitions(p)) {
    auto table = young_yamanouchi(mu, Orientation::LeftToRight);
    const Eigen::MatrixXd& m = table->matrix(sigma);
    for (int i = 1; i <= table->dimension(); ++i)
      for (int j = 1; j <= table->dimension(); ++j)
        out.push_back({mu, i, j, m(i - 1, j - 1)});
  }
  return out;
}

// Coefficients of V_sigma E^mu_ij V_sigma^{-1} over the units of the same
// shape: entry (k,l) carries phi_ki(sigma) phi_jl(sigma^{-1}).
inline std::map<std::pair<int, int>, double> conjugate_unit(const Permutation& sigma,
                                                            const UnitLabel& label) {
  auto table = young_yamanouchi(label.mu, label.orient);
  int i = table->path_index(label.row), j = table->path_index(label.col);
  const Eigen::MatrixXd& fwd = table->matrix(sigma);
  const Eigen::MatrixXd& bwd = table->matrix(sigma.inverse());
  std::map<std::pair<int, int>, double> out;
  for (int k = 1; k <= table->dimension(); ++k)
    for (int l = 1; l <= table->dimension(); ++l)
      out[{k, l}] = fwd(k - 1, i - 1) * bwd(j - 1, l - 1);
  return out;
}

// Partial trace of a unit over the final slot of its construction order
// (letter p for left-to-right chains, letter 1 for right-to-left). The result
// is proportional to the one-box-down unit selected by matching penultimate
// shapes; the proportionality constant is measured, not assumed.
struct UnitTraceDown {
  Partition alpha_row, alpha_col;
  double coefficient = 0.0;       // zero when the penultimate shapes differ
  std::optional<UnitLabel> reduced;  // present when the shapes match and p > 1
  double residual = 0.0;          // distance from the measured multiple
};

inline UnitTraceDown trace_last_unit(const UnitLabel& label, int d, int traced_slot = -1) {
  int p = label.weight();
  if (p < 2) throw std::invalid_argument("nothing below a single letter");
  int construction_final = label.orient == Orientation::LeftToRight ? p : 1;
  if (traced_slot != -1 && traced_slot != construction_final)
    throw std::invalid_argument("trace incompatible with construction order");

  const DenseOperator& e = matrix_unit(label, d);
  DenseOperator traced = partial_trace(e, {construction_final});

  UnitTraceDown out;
  out.alpha_row = label.row.penultimate();
  out.alpha_col = label.col.penultimate();
  if (out.alpha_row != out.alpha_col) {
    out.coefficient = 0.0;
    out.residual = max_abs(traced);
    return out;
  }

  BranchPath row = label.row, col = label.col;
  row.chain.pop_back();
  col.chain.pop_back();
  UnitLabel reduced{out.alpha_row, std::move(row), std::move(col), label.orient};
  const DenseOperator& target = matrix_unit(reduced, d);

  double norm2 = frobenius(target, target).real();
  if (norm2 < 1e-12) {
    // the smaller unit vanishes for this d; only a zero trace is consistent
    out.coefficient = 0.0;
    out.residual = max_abs(traced);
    out.reduced = std::move(reduced);
    return out;
  }
  out.coefficient = frobenius(target, traced).real() / norm2;
  out.residual = max_abs_dev(traced, out.coefficient * target);
  out.reduced = std::move(reduced);
  return out;
}

// Largest deviation from the product law: units multiply as matrix units,
// matching shapes and inner indices.
inline VerificationReport unit_product_law_check(int p, int d) {
  auto labels = unit_labels(p);
  DeviationTracker track;
  for (const UnitLabel& a : labels)
    for (const UnitLabel& b : labels) {
      const DenseOperator& ea = matrix_unit(a, d);
      const DenseOperator& eb = matrix_unit(b, d);
      DenseOperator product = ea * eb;
      DenseOperator expected = DenseOperator::zero(d, p);
      if (a.mu == b.mu && a.col == b.row)
        expected = matrix_unit(UnitLabel{a.mu, a.row, b.col, a.orient}, d);
      track.feed(product, expected, a.to_string() + "*" + b.to_string());
    }
  return track.report("unit-product-law", p, d, 1e-11);
}

// Largest deviation of unit traces from multiplicity times the row/column
// index match.
inline VerificationReport unit_trace_check(int p, int d) {
  DeviationTracker track;
  for (const UnitLabel& a : unit_labels(p)) {
    double expected = a.row == a.col ? static_cast<double>(a.mu.multiplicity(d)) : 0.0;
    std::complex<double> tr = matrix_unit(a, d).trace();
    track.feed(std::abs(tr - std::complex<double>(expected)), a.to_string());
  }
  return track.report("unit-trace-law", p, d, 1e-11);
}

}  // namespace wba
