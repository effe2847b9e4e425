#pragma once

// Explicit structure of the two-letter algebra: matrix bases of the three
// layer ideals, the central projectors onto them, and the block decomposition
// cross-checked against the dense span of the flipped permutation operators.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wba/dense_operator.hpp"
#include "wba/matrix_units.hpp"
#include "wba/oracle.hpp"
#include "wba/partition.hpp"
#include "wba/permutation.hpp"
#include "wba/report.hpp"
#include "wba/walled.hpp"

namespace wba {

// The two shapes on a pair of letters.
enum class Letter { S, A };

inline Partition letter_shape(Letter x) {
  return x == Letter::S ? Partition({2}) : Partition({1, 1});
}

inline double letter_multiplicity(Letter x, int d) { return letter_shape(x).multiplicity(d); }

inline std::string letter_name(Letter x) { return x == Letter::S ? "S" : "A"; }

// Ordered shape pairs indexing the deep layer, in the fixed Gram order.
enum class Sector { SS, SA, AS, AA };

inline constexpr std::array<Sector, 4> all_sectors() {
  return {Sector::SS, Sector::SA, Sector::AS, Sector::AA};
}

inline int sector_index(Sector s) { return static_cast<int>(s); }

inline Letter sector_left(Sector s) {
  return (s == Sector::SS || s == Sector::SA) ? Letter::S : Letter::A;
}

inline Letter sector_right(Sector s) {
  return (s == Sector::SS || s == Sector::AS) ? Letter::S : Letter::A;
}

inline Sector make_sector(Letter i, Letter j) {
  return static_cast<Sector>(2 * (i == Letter::A) + (j == Letter::A));
}

inline std::string sector_name(Sector s) {
  return "[" + letter_name(sector_left(s)) + letter_name(sector_right(s)) + "]";
}

namespace detail {

// Letters on the left factor read left to right, on the right factor right to
// left. On a pair of letters the reversal is the transposition and both
// shapes are one-dimensional, so the two orientations agree; the test suite
// asserts that instead of assuming it.
inline DenseOperator half_unit(Letter x, int d, Orientation o) {
  return matrix_unit(unit_label(letter_shape(x), 1, 1, o), d);
}

// E_x (x) 1
inline DenseOperator left_unit(Letter x, int d) {
  return kron(half_unit(x, d, Orientation::LeftToRight), DenseOperator::identity(d, 2));
}

// 1 (x) E_x
inline DenseOperator right_unit(Letter x, int d) {
  return kron(DenseOperator::identity(d, 2), half_unit(x, d, Orientation::RightToLeft));
}

// E_i (x) E_j
inline DenseOperator pair_operator(Letter i, Letter j, int d) {
  return unit_pair(unit_label(letter_shape(i), 1, 1, Orientation::LeftToRight),
                   unit_label(letter_shape(j), 1, 1, Orientation::RightToLeft), d);
}

}  // namespace detail

// Gram matrix of the deep-layer generators, diagonal in the sector order.
// Singular at d = 2, where the last sector has no support.
inline Eigen::Matrix4d b1_matrix(int d) {
  if (d < 2) throw std::invalid_argument("b1_matrix needs d >= 2");
  Eigen::Vector4d diag;
  diag << d + 2, d, d, d - 2;
  return Eigen::Matrix4d((diag / (4.0 * d)).asDiagonal());
}

inline bool g2_vanishes(Letter k, Letter l, int d) {
  return letter_multiplicity(k, d) == 0 || letter_multiplicity(l, d) == 0;
}

// Matrix units of the top layer. The weight pairs 1/sqrt(m_k m_l) with the
// unnormalized top arc; written through Q^(2) = V^(2)/d^2 the factor d^2
// reappears explicitly.
inline DenseOperator g2_unit(Letter k, Letter l, int d) {
  if (d < 1) throw std::invalid_argument("g2_unit needs d >= 1");
  if (g2_vanishes(k, l, d)) return DenseOperator::zero(d, 4);
  const double w =
      static_cast<double>(d) * d / std::sqrt(letter_multiplicity(k, d) * letter_multiplicity(l, d));
  return w * (detail::left_unit(k, d) * q_projector(2, d, 2) * detail::left_unit(l, d));
}

// The top projector compressed into its own unit basis: entries
// sqrt(m_k m_l)/d^2 in the letter order S, A.
inline Eigen::Matrix2d q2_rep_matrix(int d) {
  if (d < 2) throw std::invalid_argument("q2_rep_matrix needs d >= 2");
  const double r = std::sqrt(static_cast<double>(d) * d - 1.0);
  Eigen::Matrix2d m;
  m << d + 1, r, r, d - 1;
  return m / (2.0 * d);
}

inline bool g1_vanishes(Sector ij, Sector kl, int d) {
  return d == 2 && (ij == Sector::AA || kl == Sector::AA);
}

// Matrix units of the deep layer: projector sandwiches rescaled by the
// inverted Gram entry of the row sector. At d = 2 the dropped sector's
// sandwiches vanish identically and the unit is returned as zero.
inline DenseOperator g1_unit(Sector ij, Sector kl, int d) {
  const double b = b1_matrix(d)(sector_index(ij), sector_index(ij));
  if (b == 0.0) return DenseOperator::zero(d, 4);
  DenseOperator s = detail::pair_operator(sector_left(ij), sector_right(ij), d) *
                    q_projector(2, d, 1) *
                    detail::pair_operator(sector_left(kl), sector_right(kl), d);
  return (1.0 / b) * s;
}

inline bool g0_vanishes(Letter i, Letter j, int d) {
  const double mi = letter_multiplicity(i, d);
  const double mj = letter_multiplicity(j, d);
  const bool kept = b1_matrix(d)(sector_index(make_sector(i, j)), sector_index(make_sector(i, j))) != 0.0;
  const double trace = mi * mj - (kept ? static_cast<double>(d) * d - 1.0 : 0.0) - (i == j ? 1.0 : 0.0);
  return std::abs(trace) < 0.5;
}

// Scalar-line generators of the bottom layer: the pair unit with its deep and
// top shadows removed. The deep shadow carries the inverted Gram weight and is
// skipped on the dropped sector; the top shadow pairs 1/m_i with the
// unnormalized arc, hence d^2/m_i against Q^(2). Idempotence is asserted on
// construction since the subtraction weights are exactly what it hinges on.
inline DenseOperator g0_unit(Letter i, Letter j, int d) {
  if (d < 2) throw std::invalid_argument("g0_unit needs d >= 2");
  const DenseOperator pair = detail::pair_operator(i, j, d);
  DenseOperator g = pair;
  const double b = b1_matrix(d)(sector_index(make_sector(i, j)), sector_index(make_sector(i, j)));
  if (b != 0.0) g = g + (-1.0 / b) * (pair * q_projector(2, d, 1) * pair);
  if (i == j) {
    const double w = static_cast<double>(d) * d / letter_multiplicity(i, d);
    g = g + (-w) * (detail::right_unit(i, d) * q_projector(2, d, 2) * detail::left_unit(j, d));
  }
  if (max_abs_dev(g * g, g) > 1e-10)
    throw std::logic_error("bottom-layer unit is not idempotent");
  return g;
}

struct LayerProjectors {
  DenseOperator g2;
  DenseOperator g1;
  DenseOperator g0;
};

// The three central idempotents cutting the algebra into its layers; they are
// mutually orthogonal and resolve the identity.
inline LayerProjectors projectors(int d) {
  DenseOperator g2 = g2_unit(Letter::S, Letter::S, d) + g2_unit(Letter::A, Letter::A, d);
  DenseOperator g1 = DenseOperator::zero(d, 4);
  for (Sector s : all_sectors())
    if (!g1_vanishes(s, s, d)) g1 = g1 + g1_unit(s, s, d);
  DenseOperator g0 = DenseOperator::identity(d, 4) + (-1.0) * g1 + (-1.0) * g2;
  return {std::move(g2), std::move(g1), std::move(g0)};
}

struct Block22 {
  std::string ideal;  // layer tag
  bool matrix = false;  // full matrix algebra rather than a scalar line
  int size = 0;       // matrix dimension; 1 for scalar lines
  int dimension = 0;  // contribution to the algebra dimension: size^2 or 1
  std::vector<std::string> generators;  // labels of the surviving units
};

struct Decomposition22 {
  int d = 0;
  std::vector<Block22> blocks;
  int total_dimension = 0;
  int dense_span_rank = 0;  // rank of the flipped permutation family
};

// The 24 flipped permutation operators spanning the whole algebra.
inline std::vector<DenseOperator> algebra_generators_22(int d) {
  std::vector<DenseOperator> out;
  for (const Permutation& s : enumerate_group(4))
    out.push_back(partial_transpose(perm_operator(s, d, 4), {3, 4}));
  return out;
}

// Block structure of the two-letter algebra. Scalar lines whose generator is
// a zero idempotent are excluded, so the reported total matches the dense
// span rank of the generator family at every d.
inline Decomposition22 decompose_22(int d) {
  if (d < 2) throw std::invalid_argument("decompose_22 needs d >= 2");
  Decomposition22 out;
  out.d = d;

  Block22 top{"layer-2", true, 2, 4, {}};
  for (Letter k : {Letter::S, Letter::A})
    for (Letter l : {Letter::S, Letter::A}) top.generators.push_back(letter_name(k) + letter_name(l));
  out.blocks.push_back(std::move(top));

  std::vector<Sector> kept;
  for (Sector s : all_sectors())
    if (!g1_vanishes(s, s, d)) kept.push_back(s);
  Block22 deep{"layer-1", true, static_cast<int>(kept.size()),
               static_cast<int>(kept.size() * kept.size()), {}};
  for (Sector a : kept)
    for (Sector b : kept) deep.generators.push_back(sector_name(a) + sector_name(b));
  out.blocks.push_back(std::move(deep));

  for (Letter i : {Letter::S, Letter::A})
    for (Letter j : {Letter::S, Letter::A})
      if (!g0_vanishes(i, j, d))
        out.blocks.push_back({"layer-0", false, 1, 1, {letter_name(i) + letter_name(j)}});

  for (const Block22& b : out.blocks) out.total_dimension += b.dimension;
  out.dense_span_rank = span_rank(algebra_generators_22(d));
  return out;
}

// The bottom sandwich space is not an ideal: multiplying its generators into
// the deep layer leaves the space. Verifies the two contraction identities
// that make the bottom units work, then exhibits the leak as a span-rank jump
// with nonzero overlap against a deep unit.
inline VerificationReport n0_not_ideal_witness(int d) {
  DeviationTracker t;
  const DenseOperator& q2 = q_projector(2, d, 2);
  const DenseOperator& q1 = q_projector(2, d, 1);
  const DenseOperator& q0 = q_projector(2, d, 0);
  const DenseOperator id = DenseOperator::identity(d, 4);
  const Eigen::Matrix4d b = b1_matrix(d);

  for (Letter i : {Letter::S, Letter::A})
    for (Letter j : {Letter::S, Letter::A}) {
      const DenseOperator pair = detail::pair_operator(i, j, d);
      const std::string tag = letter_name(i) + letter_name(j);
      DenseOperator top_tail = DenseOperator::zero(d, 4);
      if (i == j) {
        const double w = letter_multiplicity(i, d) / (static_cast<double>(d) * d);
        top_tail = (detail::left_unit(i, d) + (-w) * id) * q2;
      }
      t.feed(q0 * pair * q2, top_tail, "top tail " + tag);
      const double c = b(sector_index(make_sector(i, j)), sector_index(make_sector(i, j)));
      t.feed(q0 * pair * q1, (pair + (-c) * id) * q1, "deep tail " + tag);
    }

  std::vector<DenseOperator> family;
  for (Letter i : {Letter::S, Letter::A})
    for (Letter j : {Letter::S, Letter::A})
      for (Letter k : {Letter::S, Letter::A})
        for (Letter l : {Letter::S, Letter::A})
          family.push_back(detail::pair_operator(i, j, d) * q0 * detail::pair_operator(k, l, d));
  const int base = span_rank(family);
  const DenseOperator deep = g1_unit(Sector::SS, Sector::SS, d);
  const DenseOperator leaked = family.front() * deep;
  family.push_back(leaked);
  t.feed(span_rank(family) == base + 1 ? 0.0 : 1.0, "product leaves the span");
  t.feed(std::abs(frobenius(leaked, deep)) > 1e-6 ? 0.0 : 1.0, "leak meets the deep layer");
  return t.report("bottom-sandwiches-not-ideal", 2, d, 1e-10);
}

}  // namespace wba
