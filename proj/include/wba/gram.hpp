#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wba/dense_operator.hpp"
#include "wba/irrep.hpp"
#include "wba/matrix_units.hpp"
#include "wba/partition.hpp"
#include "wba/walled.hpp"

namespace wba {

// The one-level-down ideal is spanned by elements E otimes E Q^(k) E otimes E.
// Such an element survives only when the inner column of the left pair and the
// inner row of the right pair run through a shared child shape with a common
// sub-path; the surviving family is indexed by a five-part label.

inline DenseOperator span_element(const UnitLabel& left_a, const UnitLabel& right_a,
                                  const UnitLabel& left_b, const UnitLabel& right_b, int k,
                                  int d) {
  detail::require_unit_pair(left_a, right_a);
  detail::require_unit_pair(left_b, right_b);
  if (left_a.weight() != left_b.weight()) throw std::invalid_argument("weight mismatch");
  const DenseOperator q = q_projector(left_a.weight(), d, k);
  return unit_pair(left_a, right_a, d) * q * unit_pair(left_b, right_b, d);
}

struct MultiIndex {
  Partition xi, eta;     // top shapes; must share at least one child
  BranchPath row_left;   // free path of the xi table
  BranchPath row_right;  // free path of the eta table
  Partition kappa;       // the shared child carrying the contracted indices

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.xi == b.xi && a.eta == b.eta && a.row_left == b.row_left &&
           a.row_right == b.row_right && a.kappa == b.kappa;
  }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    auto key = [](const MultiIndex& m) {
      return std::tie(m.xi, m.eta, m.kappa, m.row_left, m.row_right);
    };
    return key(a) < key(b);
  }

  std::string to_string() const {
    return "[" + xi.to_string() + "," + eta.to_string() + ";" + row_left.to_string() + "," +
           row_right.to_string() + ";" + kappa.to_string() + "]";
  }
};

inline MultiIndex make_multi_index(const Partition& xi, const Partition& eta,
                                   const BranchPath& row_left, const BranchPath& row_right,
                                   const Partition& kappa) {
  auto shared = common_children(xi, eta);
  if (std::find(shared.begin(), shared.end(), kappa) == shared.end())
    throw std::invalid_argument("shapes do not share the requested child");
  young_yamanouchi(xi, Orientation::LeftToRight)->path_index(row_left);
  young_yamanouchi(eta, Orientation::LeftToRight)->path_index(row_right);
  return MultiIndex{xi, eta, row_left, row_right, kappa};
}

inline std::vector<MultiIndex> multi_index_set(int p) {
  if (p < 2) throw std::invalid_argument("ideal index set wants p >= 2");
  std::vector<MultiIndex> out;
  for (const Partition& xi : enumerate_partitions(p))
    for (const Partition& eta : enumerate_partitions(p))
      for (const Partition& kappa : common_children(xi, eta)) {
        auto tx = young_yamanouchi(xi, Orientation::LeftToRight);
        auto te = young_yamanouchi(eta, Orientation::LeftToRight);
        for (int i = 1; i <= tx->dimension(); ++i)
          for (int j = 1; j <= te->dimension(); ++j)
            out.push_back(MultiIndex{xi, eta, tx->index_path(i), te->index_path(j), kappa});
      }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

// Path through `child` whose sub-path is the free_index-th chain of the child
// table; the generating elements do not depend on that choice.
inline BranchPath child_path(const Partition& shape, const Partition& child, int free_index = 1) {
  auto table = young_yamanouchi(shape, Orientation::LeftToRight);
  auto [first, last] = table->block_range(child);
  if (first == 0) throw std::invalid_argument("shapes do not share the requested child");
  if (free_index < 1 || first + free_index - 1 > last)
    throw std::invalid_argument("free sub-path index out of range");
  return table->index_path(first + free_index - 1);
}

}  // namespace detail

// Generating element of the one-arc-down ideal: the left pair closes on the
// shared child of gamma, the right pair opens on the shared child of delta.
inline DenseOperator ghat(const MultiIndex& gamma, const MultiIndex& delta, int d,
                          int free_left = 1, int free_right = 1) {
  if (gamma.xi.weight() != delta.xi.weight()) throw std::invalid_argument("weight mismatch");
  const int p = gamma.xi.weight();
  auto lr = Orientation::LeftToRight;
  auto rl = Orientation::RightToLeft;
  UnitLabel la{gamma.xi, gamma.row_left, detail::child_path(gamma.xi, gamma.kappa, free_left), lr};
  UnitLabel ra{gamma.eta, gamma.row_right, detail::child_path(gamma.eta, gamma.kappa, free_left),
               rl};
  UnitLabel lb{delta.xi, detail::child_path(delta.xi, delta.kappa, free_right), delta.row_left,
               lr};
  UnitLabel rb{delta.eta, detail::child_path(delta.eta, delta.kappa, free_right), delta.row_right,
               rl};
  return span_element(la, ra, lb, rb, p - 1, d);
}

// Gram entry of the generating family: the sandwich constant of the unit pair
// whose rows run through delta's child and whose columns run through lambda's.
inline double gram_entry(const MultiIndex& delta, const MultiIndex& lambda, int d) {
  if (!(delta.xi == lambda.xi) || !(delta.eta == lambda.eta)) return 0;
  if (delta.row_left != lambda.row_left || delta.row_right != lambda.row_right) return 0;
  auto lr = Orientation::LeftToRight;
  auto rl = Orientation::RightToLeft;
  UnitLabel left{delta.xi, detail::child_path(delta.xi, delta.kappa),
                 detail::child_path(lambda.xi, lambda.kappa), lr};
  UnitLabel right{delta.eta, detail::child_path(delta.eta, delta.kappa),
                  detail::child_path(lambda.eta, lambda.kappa), rl};
  return q_sandwich_constant(left, right, d);
}

// Same entry under the aligned-pairing shortcut; exact on one-dimensional
// shape pairs only.
inline double gram_entry_aligned(const MultiIndex& delta, const MultiIndex& lambda, int d) {
  if (!(delta.xi == lambda.xi) || !(delta.eta == lambda.eta)) return 0;
  if (delta.row_left != lambda.row_left || delta.row_right != lambda.row_right) return 0;
  const int p = delta.xi.weight();
  const double m_mu = static_cast<double>(delta.xi.multiplicity(d));
  const double m_nu = static_cast<double>(delta.eta.multiplicity(d));
  const double m_child = static_cast<double>(delta.kappa.multiplicity(d));
  double bracket = 0;
  if (delta.kappa == lambda.kappa && m_child != 0) bracket += d * m_mu * m_nu / m_child;
  if (delta.xi == delta.eta) bracket -= m_mu;
  return bracket / (static_cast<double>(ipow(d, p)) * (static_cast<double>(d) * d - 1));
}

struct GramMatrix {
  std::vector<MultiIndex> index_set;
  Eigen::MatrixXd entries;
  int p = 0, d = 0;
};

inline GramMatrix gram_matrix(int p, int d) {
  GramMatrix g;
  g.index_set = multi_index_set(p);
  g.p = p;
  g.d = d;
  const int n = static_cast<int>(g.index_set.size());
  g.entries.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.entries(i, j) = gram_entry(g.index_set[i], g.index_set[j], d);
  return g;
}

// Inner block over the shared children of a shape pair; the full Gram matrix
// within the (xi, eta) sector is the identity over free path pairs tensored
// with this block.
inline Eigen::MatrixXd gram_block(const Partition& mu, const Partition& nu, int d) {
  auto children = common_children(mu, nu);
  if (children.empty()) throw std::invalid_argument("shapes do not share a child");
  auto tx = young_yamanouchi(mu, Orientation::LeftToRight);
  auto te = young_yamanouchi(nu, Orientation::LeftToRight);
  const BranchPath i = tx->index_path(1), j = te->index_path(1);
  const int n = static_cast<int>(children.size());
  Eigen::MatrixXd block(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      block(a, b) = gram_entry(MultiIndex{mu, nu, i, j, children[a]},
                               MultiIndex{mu, nu, i, j, children[b]}, d);
  return block;
}

struct InvertibilityReport {
  bool invertible = true;
  std::vector<Partition> witnesses;
};

// A diagonal sector degenerates exactly when d times its multiplicity equals
// the summed multiplicities of its children; shapes taller than d carry no
// operators at all and are skipped.
inline InvertibilityReport gram_invertibility(int p, int d) {
  if (p < 2) throw std::invalid_argument("ideal index set wants p >= 2");
  InvertibilityReport report;
  for (const Partition& mu : enumerate_partitions(p)) {
    const std::int64_t m = mu.multiplicity(d);
    if (m == 0) continue;
    std::int64_t child_sum = 0;
    for (const Partition& alpha : remove_box(mu)) child_sum += alpha.multiplicity(d);
    if (d * m == child_sum) {
      report.invertible = false;
      report.witnesses.push_back(mu);
    }
  }
  return report;
}

struct PureBasis {
  std::vector<MultiIndex> index_set;
  Eigen::MatrixXd inverse;   // pseudo-inverse of the Gram matrix
  Eigen::VectorXd spectrum;  // Gram eigenvalues, ascending
  std::vector<int> dropped;  // index positions spanning the null space
  int p = 0, d = 0;
};

// Orthogonalizes the generating family. Null directions of the Gram matrix
// (degenerate d, or shapes invisible at this d) are dropped rather than
// inverted; the surviving family obeys pure matrix multiplication.
inline PureBasis pure_basis(int p, int d, double cutoff = 1e-9) {
  GramMatrix g = gram_matrix(p, d);
  PureBasis basis;
  basis.index_set = std::move(g.index_set);
  basis.p = p;
  basis.d = d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.entries);
  basis.spectrum = eig.eigenvalues();
  const int n = static_cast<int>(basis.spectrum.size());
  const double scale = basis.spectrum.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv_spec(n);
  for (int i = 0; i < n; ++i)
    inv_spec(i) = std::abs(basis.spectrum(i)) > cutoff * scale ? 1.0 / basis.spectrum(i) : 0.0;
  basis.inverse = eig.eigenvectors() * inv_spec.asDiagonal() * eig.eigenvectors().transpose();
  Eigen::MatrixXd residual = g.entries * basis.inverse;
  for (int i = 0; i < n; ++i)
    if (std::abs(residual(i, i)) < 0.5) basis.dropped.push_back(i);
  return basis;
}

// Element of the orthogonalized family. Indices that hit the null space are
// cut out of the basis entirely, so any element touching one is zero.
inline DenseOperator pure_basis_element(const PureBasis& basis, int delta, int pi) {
  const int n = static_cast<int>(basis.index_set.size());
  if (delta < 0 || delta >= n || pi < 0 || pi >= n)
    throw std::invalid_argument("pure basis index out of range");
  DenseOperator out = DenseOperator::zero(basis.d, 2 * basis.p);
  const auto& gone = basis.dropped;
  if (std::find(gone.begin(), gone.end(), delta) != gone.end()) return out;
  if (std::find(gone.begin(), gone.end(), pi) != gone.end()) return out;
  for (int lambda = 0; lambda < n; ++lambda) {
    const double w = basis.inverse(lambda, delta);
    if (w == 0.0) continue;
    out = out + w * ghat(basis.index_set[lambda], basis.index_set[pi], basis.d);
  }
  return out;
}

// ---- overlaps between arc layers ----

// Matrix units compose index-wise; a vanishing chain short-circuits the whole
// overlap without touching any dense object.
inline std::optional<UnitLabel> compose_units(const UnitLabel& a, const UnitLabel& b) {
  if (!(a.mu == b.mu) || a.orient != b.orient) return std::nullopt;
  if (a.col != b.row) return std::nullopt;
  return UnitLabel{a.mu, a.row, b.col, a.orient};
}

struct OverlapValue {
  double dense = 0;
  double reduced = 0;
};

// Trace of (E V^(r) E)(E V^(s) E) computed both directly and through the
// layer reduction: contract the inner r arcs away, multiply in the leftover
// outer arcs, and trace on the small system.
inline OverlapValue overlap(int r, int s, const UnitLabel& a_left, const UnitLabel& a_right,
                            const UnitLabel& b_left, const UnitLabel& b_right, int d) {
  detail::require_unit_pair(a_left, a_right);
  detail::require_unit_pair(b_left, b_right);
  const int p = a_left.weight();
  if (b_left.weight() != p) throw std::invalid_argument("weight mismatch");
  if (r < 0 || r >= s || s > p) throw std::invalid_argument("overlap wants 0 <= r < s <= p");

  OverlapValue value;
  const DenseOperator obj_r = ideal_element(a_left, a_right, r, d);
  const DenseOperator obj_s = ideal_element(b_left, b_right, s, d);
  value.dense = product_trace(obj_r, obj_s).real();

  auto cl = compose_units(a_left, b_left);
  auto cr = compose_units(a_right, b_right);
  auto dl = compose_units(b_left, a_left);
  auto dr = compose_units(b_right, a_right);
  if (cl && cr && dl && dr) {
    const DenseOperator x = contract(unit_pair(*cl, *cr, d), r);
    const DenseOperator y = contract(unit_pair(*dl, *dr, d), r);
    value.reduced = product_trace(x * arc_operator(p - r, d, s - r), y).real();
  }
  return value;
}

// ---- the ping-pong primitive ----

// Trace of a unit pair against V^(m) evaluated as a pairing of partial traces:
// flip the left factor so both remainders read away from the wall, trace
// everything past the first m letters, and close the two m-slot remainders on
// each other through the arcs. The arcs transpose one factor; the slot
// reversals hidden in the flip cancel between the two sides.
inline double pair_trace_pingpong(const UnitLabel& left, const UnitLabel& right, int m, int d) {
  detail::require_unit_pair(left, right);
  const int p = left.weight();
  if (m < 0 || m > p) throw std::invalid_argument("slot mismatch");
  std::vector<int> tail;
  for (int s = m + 1; s <= p; ++s) tail.push_back(s);
  const DenseOperator& flipped_left =
      matrix_unit(UnitLabel{left.mu, left.row, left.col, Orientation::RightToLeft}, d);
  const DenseOperator al = partial_trace(flipped_left, tail);
  const DenseOperator ar = partial_trace(matrix_unit(right, d), tail);
  return (al.m * ar.m.transpose()).trace().real();
}

}  // namespace wba
