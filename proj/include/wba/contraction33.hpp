#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wba/algebra22.hpp"
#include "wba/matrix_units.hpp"
#include "wba/walled.hpp"

namespace wba {

// The three-letter group algebra seen from the two-letter one: every path of
// a three-box shape is tagged by the two-box shape it passes through, so the
// units carry branch letters. The one-row and one-column diagrams admit a
// single branch (S resp. A), the hook one of each; that makes six units.
struct S3Unit {
  Partition mu;
  Letter row = Letter::S, col = Letter::S;

  std::string to_string() const {
    return mu.to_string() + ":" + letter_name(row) + letter_name(col);
  }
};

inline bool s3_valid(const S3Unit& u) {
  if (u.mu.weight() != 3) return false;
  std::vector<Partition> kids = remove_box(u.mu);
  auto has = [&](Letter x) {
    return std::find(kids.begin(), kids.end(), letter_shape(x)) != kids.end();
  };
  return has(u.row) && has(u.col);
}

inline std::vector<S3Unit> s3_labels() {
  Partition three({3}), hook({2, 1}), column({1, 1, 1});
  return {{three, Letter::S, Letter::S}, {column, Letter::A, Letter::A},
          {hook, Letter::S, Letter::S},  {hook, Letter::S, Letter::A},
          {hook, Letter::A, Letter::S},  {hook, Letter::A, Letter::A}};
}

// On three letters each branch holds exactly one path, so a branch letter
// pins the path index.
inline UnitLabel s3_unit_label(const S3Unit& u, Orientation orient) {
  if (!s3_valid(u)) throw std::invalid_argument("branch letters do not fit the shape");
  auto table = young_yamanouchi(u.mu, orient);
  auto pick = [&](Letter x) {
    auto [first, last] = table->block_range(letter_shape(x));
    return table->index_path(first);
  };
  return UnitLabel{u.mu, pick(u.row), pick(u.col), orient};
}

inline const DenseOperator& s3_unit(const S3Unit& u, int d,
                                    Orientation orient = Orientation::LeftToRight) {
  return matrix_unit(s3_unit_label(u, orient), d);
}

inline std::vector<std::pair<S3Unit, DenseOperator>> s3_units(
    int d, Orientation orient = Orientation::LeftToRight) {
  if (d < 1) throw std::invalid_argument("local dimension must be positive");
  std::vector<std::pair<S3Unit, DenseOperator>> out;
  for (const S3Unit& u : s3_labels()) out.emplace_back(u, s3_unit(u, d, orient));
  return out;
}

// Tr[(E_left (x) E_right) V^(1)]: only the wall arc is occupied, every other
// slot is traced freely, so each factor contributes its plain trace and the
// arc splices one power of d away.
inline double single_arc_trace(const UnitLabel& left, const UnitLabel& right, int d) {
  detail::require_unit_pair(left, right);
  if (left.row != left.col || right.row != right.col) return 0.0;
  return static_cast<double>(left.mu.multiplicity(d)) *
         static_cast<double>(right.mu.multiplicity(d)) / d;
}

inline double single_arc_trace(const Partition& mu, int i, int j, const Partition& nu, int k,
                               int l, int p, int d) {
  if (mu.weight() != p || nu.weight() != p)
    throw std::invalid_argument("shape weight must match the letter count");
  return single_arc_trace(unit_label(mu, i, j, Orientation::LeftToRight),
                          unit_label(nu, k, l, Orientation::RightToLeft), d);
}

inline VerificationReport single_arc_trace_check(int p, int d) {
  DeviationTracker track;
  const DenseOperator& v1 = arc_operator(p, d, 1);
  for (const UnitLabel& l : unit_labels(p, Orientation::LeftToRight))
    for (const UnitLabel& r : unit_labels(p, Orientation::RightToLeft)) {
      std::complex<double> dense = product_trace(unit_pair(l, r, d), v1);
      double closed = single_arc_trace(l, r, d);
      double scale = std::max({1.0, std::abs(dense), std::abs(closed)});
      track.feed(std::abs(dense - std::complex<double>(closed)) / scale,
                 l.to_string() + "|" + r.to_string());
    }
  return track.report("single-arc-trace", p, d, 1e-11);
}

namespace detail {

// Flat image of every digit string under a slot permutation, following the
// perm_operator convention: digit j of the source lands on slot sigma(j).
inline std::vector<std::int64_t> flat_images(const Permutation& sigma, const DenseOperator& shape) {
  std::vector<std::int64_t> t(shape.dim());
  for (std::int64_t k = 0; k < shape.dim(); ++k) {
    std::int64_t img = 0;
    for (int j = 1; j <= shape.n; ++j)
      img += static_cast<std::int64_t>(shape.digit(k, j)) * shape.stride(sigma(j));
    t[k] = img;
  }
  return t;
}

// V_sigma x and x V_sigma as row/column relabelings; a slot permutation never
// needs a full product.
inline DenseOperator perm_times(const Permutation& sigma, const DenseOperator& x) {
  auto t = flat_images(sigma, x);
  DenseOperator out = DenseOperator::zero(x.d, x.n);
  for (std::int64_t r = 0; r < x.dim(); ++r) out.m.row(t[r]) = x.m.row(r);
  return out;
}

inline DenseOperator times_perm(const DenseOperator& x, const Permutation& sigma) {
  auto t = flat_images(sigma, x);
  DenseOperator out = DenseOperator::zero(x.d, x.n);
  for (std::int64_t c = 0; c < x.dim(); ++c) out.m.col(c) = x.m.col(t[c]);
  return out;
}

}  // namespace detail

// Single arc between left slot a and the mirror of right letter c: the
// partially transposed transposition, reaching across the wall without
// touching the wall-adjacent pair.
inline DenseOperator cross_arc(int a, int c, int p, int d) {
  if (a < 1 || a > p || c < 1 || c > p) throw std::invalid_argument("arc ends out of range");
  int fc = 2 * p + 1 - c;
  return partial_transpose(perm_operator(Permutation::transposition(2 * p, a, fc), d, 2 * p),
                           {fc});
}

// Conjugating side permutations through the wall arc: V^t V_(a,p) V_(p',c')
// V^t equals V^t times the crossed arc (a,c'), and also the outer-relabeled
// sandwich of V^t with the crossed arc one step further out. One-sided
// permutations are swallowed whole. Vacuous below two letters per side.
inline VerificationReport arc_conjugation_facts(int p, int d) {
  if (p < 1 || d < 1) throw std::invalid_argument("need at least one letter and dimension");
  DeviationTracker track;
  if (p >= 2) {
    const DenseOperator& vt = arc_operator(p, d, 1);
    DenseOperator mid = vt * cross_arc(p - 1, p - 1, p, d);
    for (int a = 1; a <= p - 1; ++a) {
      Permutation la = Permutation::transposition(2 * p, a, p);
      track.feed(vt * detail::perm_times(la, vt), vt, "absorb-left a=" + std::to_string(a));
    }
    for (int c = 1; c <= p - 1; ++c) {
      Permutation rc = Permutation::transposition(2 * p, p + 1, 2 * p + 1 - c);
      track.feed(vt * detail::perm_times(rc, vt), vt, "absorb-right c=" + std::to_string(c));
    }
    for (int a = 1; a <= p - 1; ++a)
      for (int c = 1; c <= p - 1; ++c) {
        std::string where = " a=" + std::to_string(a) + " c=" + std::to_string(c);
        int fc = 2 * p + 1 - c;
        Permutation sides = Permutation::transposition(2 * p, a, p) *
                            Permutation::transposition(2 * p, p + 1, fc);
        DenseOperator lhs = vt * detail::perm_times(sides, vt);
        track.feed(lhs, vt * cross_arc(a, c, p, d), "crossed-arc" + where);
        Permutation outer = Permutation::transposition(2 * p, a, p - 1) *
                            Permutation::transposition(2 * p, p + 2, fc);
        track.feed(lhs, detail::perm_times(outer, detail::times_perm(mid, outer)),
                   "outer-peel" + where);
      }
  }
  return track.report("wall-arc-conjugation", p, d, 1e-12);
}

// A unit on p letters written through the units one letter down: the row path
// enters through gamma, and summing transpositions (a,p) against the row of
// representation matrix elements picked by the column path rebuilds the unit,
// d_mu/(p d_gamma) [ sum_k E^gamma_(i,k) sum_a phi^mu_(J,K(k))((a,p)) V_(a,p)
//                    + [alpha == gamma] E^gamma_(i,j) ],
// with the trailing term living on slots 1..p-1 only.
inline VerificationReport unit_decomposition_lemma(const Partition& mu, int I, int J, int p,
                                                   int d) {
  if (mu.weight() != p) throw std::invalid_argument("shape weight must match the letter count");
  if (p < 2) throw std::invalid_argument("nothing to peel below two letters");
  auto table = young_yamanouchi(mu, Orientation::LeftToRight);
  const BranchPath& pi = table->index_path(I);
  const BranchPath& pj = table->index_path(J);
  Partition gamma = pi.penultimate(), alpha = pj.penultimate();
  auto tg = young_yamanouchi(gamma, Orientation::LeftToRight);

  BranchPath prefix = pi;
  prefix.chain.pop_back();
  int ig = tg->path_index(prefix);

  std::vector<int> low(p - 1);
  for (int s = 1; s <= p - 1; ++s) low[s - 1] = s;

  DenseOperator rhs = DenseOperator::zero(d, p);
  for (int k = 1; k <= tg->dimension(); ++k) {
    BranchPath lifted = tg->index_path(k);
    lifted.chain.push_back(mu);
    int K = table->path_index(lifted);
    DenseOperator inner = DenseOperator::zero(d, p);
    for (int a = 1; a <= p - 1; ++a) {
      Permutation tap = Permutation::transposition(p, a, p);
      double phi = table->matrix(tap)(J - 1, K - 1);
      if (phi != 0.0) inner = inner + phi * perm_operator(tap, d, p);
    }
    rhs = rhs + embed(matrix_unit(gamma, ig, k, d), p, low) * inner;
  }
  if (alpha == gamma) {
    BranchPath pjow = pj;
    pjow.chain.pop_back();
    rhs = rhs + embed(matrix_unit(gamma, ig, tg->path_index(pjow), d), p, low);
  }
  rhs = (static_cast<double>(table->dimension()) / (p * tg->dimension())) * rhs;

  DeviationTracker track;
  track.feed(matrix_unit(mu, I, J, d), rhs,
             mu.to_string() + " I=" + std::to_string(I) + " J=" + std::to_string(J));
  return track.report("unit-peel-decomposition", p, d, 1e-10);
}

inline std::string letter_pair_key(Letter a, Letter b) { return letter_name(a) + letter_name(b); }
inline std::string sector_pair_key(Sector a, Sector b) { return sector_name(a) + sector_name(b); }

// Squeezing a unit pair through the wall arc: V^t (E^mu (x) E^nu) V^t equals
// V^t times a combination of the two-letter layer units on the outer slots.
struct SqueezeExpansion {
  S3Unit left, right;
  int d = 0;
  bool vanishing_input = false;  // a factor with zero multiplicity
  bool dense_checked = false;    // residual taken on the full six-slot identity
  std::map<std::string, double> lambda2, lambda1, lambda0;
  double residual = 0.0;
};

// All three coefficient families are pair traces. With T1, T2, T3 the traces
// of the pair against the one-, two- and three-arc operators, and (i,j|k,l)
// the branch letters of the two units,
//   top:    T3 / sqrt(m_i m_j)                    at the branch pair (i,j),
//   deep:   (T2/d - T3/d^2) / ((d^2-1) B_[jl])    at rows [ik], columns [jl],
//   bottom: the trace residue below the two layers, at (i,k) for
//           branch-diagonal input, divided by the line's trace.
// T2 carries the letter-reversal braiding, so hook units pick up matrix
// elements beyond plain multiplicity ratios. Every closed value is checked
// against trace extraction from the contracted element, and any disagreement
// throws with both numbers shown.
inline SqueezeExpansion squeeze(const S3Unit& left, const S3Unit& right, int d,
                                bool dense_residual = true) {
  if (d < 2) throw std::invalid_argument("squeeze needs d >= 2");
  UnitLabel ul = s3_unit_label(left, Orientation::LeftToRight);
  UnitLabel ur = s3_unit_label(right, Orientation::RightToLeft);

  SqueezeExpansion out;
  out.left = left;
  out.right = right;
  out.d = d;
  out.vanishing_input = left.mu.multiplicity(d) == 0 || right.mu.multiplicity(d) == 0;

  const double t1 = single_arc_trace(ul, ur, d);
  const double t2 = arc_unit_trace(ul, ur, d);
  const double t3 = full_pair_trace(ul, ur, d);
  const Letter i = left.row, j = left.col, k = right.row, l = right.col;
  auto ml = [&](Letter x) { return letter_multiplicity(x, d); };

  // True-zero components evaluate to at most rounding dust; keep the maps
  // clean of it so an absent key means a vanishing coefficient.
  auto keep = [](double v) { return std::abs(v) > 1e-12; };

  double lam2 = t3 / std::sqrt(ml(i) * ml(j));
  if (keep(lam2)) out.lambda2[letter_pair_key(i, j)] = lam2;

  const Sector rows = make_sector(i, k), cols = make_sector(j, l);
  double lam1 = 0.0;
  if (!g1_vanishes(rows, cols, d)) {
    double b = b1_matrix(d)(sector_index(cols), sector_index(cols));
    lam1 = (t2 / d - t3 / (d * d)) / ((d * d - 1.0) * b);
    if (keep(lam1)) out.lambda1[sector_pair_key(rows, cols)] = lam1;
  }

  if (i == j && k == l && !g0_vanishes(i, k, d)) {
    double line_trace = g0_unit(i, k, d).trace().real();
    double lam0 = (t1 - (d * d - 1.0) * lam1 - (i == k ? lam2 : 0.0)) / line_trace;
    if (keep(lam0)) out.lambda0[letter_pair_key(i, k)] = lam0;
  }

  // Trace extraction from the contracted element must reproduce every slot,
  // including the ones the closed forms leave empty.
  DenseOperator x = unit_pair(ul, ur, d);
  DenseOperator c = contract(x, 1);
  auto expect = [&](const std::map<std::string, double>& m, const std::string& key) {
    auto it = m.find(key);
    return it == m.end() ? 0.0 : it->second;
  };
  auto confront = [&](const std::string& key, double closed, double extracted) {
    if (std::abs(closed - extracted) >
        1e-9 * std::max({1.0, std::abs(closed), std::abs(extracted)}))
      throw std::logic_error("squeeze coefficient mismatch at " + key + ": closed " +
                             std::to_string(closed) + ", extracted " + std::to_string(extracted) +
                             " for " + left.to_string() + " x " + right.to_string() +
                             " at d=" + std::to_string(d));
  };
  for (Letter x1 : {Letter::S, Letter::A})
    for (Letter y1 : {Letter::S, Letter::A}) {
      std::string key = letter_pair_key(x1, y1);
      confront("top " + key, expect(out.lambda2, key),
               product_trace(c, g2_unit(y1, x1, d)).real());
      if (!g0_vanishes(x1, y1, d)) {
        DenseOperator line = g0_unit(x1, y1, d);
        confront("bottom " + key, expect(out.lambda0, key),
                 product_trace(c, line).real() / line.trace().real());
      }
    }
  for (Sector a : all_sectors())
    for (Sector b : all_sectors())
      if (!g1_vanishes(a, b, d)) {
        std::string key = sector_pair_key(a, b);
        confront("deep " + key, expect(out.lambda1, key),
                 product_trace(c, g1_unit(b, a, d)).real() / (d * d - 1.0));
      }

  DenseOperator sum = DenseOperator::zero(d, 4);
  for (Letter x1 : {Letter::S, Letter::A})
    for (Letter y1 : {Letter::S, Letter::A}) {
      if (double v = expect(out.lambda2, letter_pair_key(x1, y1)); v != 0.0)
        sum = sum + v * g2_unit(x1, y1, d);
      if (double v = expect(out.lambda0, letter_pair_key(x1, y1)); v != 0.0)
        sum = sum + v * g0_unit(x1, y1, d);
    }
  for (Sector a : all_sectors())
    for (Sector b : all_sectors())
      if (double v = expect(out.lambda1, sector_pair_key(a, b)); v != 0.0)
        sum = sum + v * g1_unit(a, b, d);

  if (dense_residual) {
    const DenseOperator& v1 = arc_operator(3, d, 1);
    std::vector<int> outer;
    std::vector<int> inner = arc_slot_list(3, 1);
    for (int s = 1; s <= 6; ++s)
      if (std::find(inner.begin(), inner.end(), s) == inner.end()) outer.push_back(s);
    out.residual = max_abs_dev(v1 * x * v1, v1 * embed(sum, 6, outer));
    out.dense_checked = true;
  } else {
    out.residual = max_abs_dev(c, sum);
  }
  return out;
}

inline SqueezeExpansion squeeze(const Partition& mu, Letter i, Letter j, const Partition& nu,
                                Letter k, Letter l, int d, bool dense_residual = true) {
  return squeeze(S3Unit{mu, i, j}, S3Unit{nu, k, l}, d, dense_residual);
}

inline std::vector<SqueezeExpansion> squeeze_sweep(int d, bool dense_residual = true) {
  std::vector<SqueezeExpansion> out;
  for (const S3Unit& a : s3_labels())
    for (const S3Unit& b : s3_labels()) out.push_back(squeeze(a, b, d, dense_residual));
  return out;
}

// The pairings that read coefficients straight off the six-slot product:
// tracing against an embedded top or deep unit picks the index-swapped
// coefficient times d resp. d(d^2-1); tracing against a bottom line picks its
// own coefficient times d and the line's trace.
inline VerificationReport extraction_identity_check(const S3Unit& left, const S3Unit& right,
                                                    int d) {
  SqueezeExpansion sq = squeeze(left, right, d, false);
  UnitLabel ul = s3_unit_label(left, Orientation::LeftToRight);
  UnitLabel ur = s3_unit_label(right, Orientation::RightToLeft);
  const DenseOperator& v1 = arc_operator(3, d, 1);
  DenseOperator lhs = v1 * unit_pair(ul, ur, d) * v1;
  std::vector<int> outer;
  std::vector<int> inner = arc_slot_list(3, 1);
  for (int s = 1; s <= 6; ++s)
    if (std::find(inner.begin(), inner.end(), s) == inner.end()) outer.push_back(s);

  auto expect = [&](const std::map<std::string, double>& m, const std::string& key) {
    auto it = m.find(key);
    return it == m.end() ? 0.0 : it->second;
  };
  DeviationTracker track;
  auto feed = [&](double got, double want, const std::string& label) {
    track.feed(std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)}), label);
  };
  for (Letter x : {Letter::S, Letter::A})
    for (Letter y : {Letter::S, Letter::A}) {
      double tr = product_trace(lhs, embed(g2_unit(x, y, d), 6, outer)).real();
      feed(tr, d * expect(sq.lambda2, letter_pair_key(y, x)), "top " + letter_pair_key(x, y));
      if (!g0_vanishes(x, y, d)) {
        DenseOperator line = g0_unit(x, y, d);
        double tl = product_trace(lhs, embed(line, 6, outer)).real();
        feed(tl, d * expect(sq.lambda0, letter_pair_key(x, y)) * line.trace().real(),
             "bottom " + letter_pair_key(x, y));
      }
    }
  for (Sector a : all_sectors())
    for (Sector b : all_sectors())
      if (!g1_vanishes(a, b, d)) {
        double tr = product_trace(lhs, embed(g1_unit(a, b, d), 6, outer)).real();
        feed(tr, d * (d * d - 1.0) * expect(sq.lambda1, sector_pair_key(b, a)),
             "deep " + sector_pair_key(a, b));
      }
  return track.report("squeeze-extraction-pairing", 3, d, 1e-10);
}

}  // namespace wba
