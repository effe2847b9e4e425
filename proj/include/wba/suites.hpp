#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wba/algebra22.hpp"
#include "wba/contraction33.hpp"
#include "wba/gram.hpp"
#include "wba/matrix_units.hpp"
#include "wba/walled.hpp"

namespace wba {

namespace detail {

inline VerificationReport merge_reports(const std::string& claim, int p, int d, double tol,
                                        const std::vector<VerificationReport>& parts) {
  double worst = 0.0;
  long cases = 0;
  std::string where;
  for (const VerificationReport& r : parts) {
    cases += r.n_cases;
    if (r.max_abs_deviation >= worst) {
      worst = r.max_abs_deviation;
      where = r.detail;
    }
  }
  return make_report(claim, p, d, worst, tol, cases, where);
}

// Left and right factors of the middle product when two generating elements
// multiply; empty when the paths do not chain.
inline std::optional<std::pair<UnitLabel, UnitLabel>> quasi_mid(const MultiIndex& delta,
                                                                const MultiIndex& lambda) {
  auto lr = Orientation::LeftToRight;
  auto rl = Orientation::RightToLeft;
  UnitLabel bl{lambda.xi, child_path(lambda.xi, lambda.kappa), lambda.row_left, lr};
  UnitLabel al{delta.xi, delta.row_left, child_path(delta.xi, delta.kappa), lr};
  UnitLabel br{lambda.eta, child_path(lambda.eta, lambda.kappa), lambda.row_right, rl};
  UnitLabel ar{delta.eta, delta.row_right, child_path(delta.eta, delta.kappa), rl};
  auto cl = compose_units(bl, al);
  auto cr = compose_units(br, ar);
  if (!cl || !cr) return std::nullopt;
  return std::pair{*cl, *cr};
}

// Orthonormal columns spanning the range of a projector.
inline Eigen::MatrixXcd projector_range(const DenseOperator& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(q.m);
  int rank = 0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) > 0.5) ++rank;
  Eigen::MatrixXcd u(q.m.rows(), rank);
  int c = 0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) > 0.5) u.col(c++) = eig.eigenvectors().col(i);
  return u;
}

}  // namespace detail

// Generating elements multiply through the Gram entry: g[gamma,delta]
// g[lambda,pi] = G(delta,lambda) g[gamma,pi]. Dense at two letters; at three
// the product sits between projectors, so with Q = U U* the statement
// compresses to U* M U = G(delta,lambda) 1 on the middle factor M.
inline VerificationReport gram_quasi_multiplication_check(int p, int d) {
  if (p != 2 && p != 3) throw std::invalid_argument("quasi law is checked at p = 2 or 3");
  DeviationTracker track;
  auto set = multi_index_set(p);
  const int n = static_cast<int>(set.size());
  if (p == 2) {
    std::vector<DenseOperator> g;
    g.reserve(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g.push_back(ghat(set[a], set[b], d));
    for (int ga = 0; ga < n; ++ga)
      for (int de = 0; de < n; ++de)
        for (int la = 0; la < n; ++la)
          for (int pi = 0; pi < n; ++pi)
            track.feed(g[ga * n + de] * g[la * n + pi],
                       gram_entry(set[de], set[la], d) * g[ga * n + pi],
                       set[de].to_string() + "*" + set[la].to_string());
  } else {
    Eigen::MatrixXcd u = detail::projector_range(q_projector(3, d, 2));
    const int r = static_cast<int>(u.cols());
    for (const MultiIndex& delta : set)
      for (const MultiIndex& lambda : set) {
        const double want = gram_entry(delta, lambda, d);
        auto mid = detail::quasi_mid(delta, lambda);
        std::string label = delta.to_string() + "*" + lambda.to_string();
        if (!mid) {
          track.feed(std::abs(want), label);
          continue;
        }
        Eigen::MatrixXcd s = u.adjoint() * unit_pair(mid->first, mid->second, d).m * u;
        double dev = (s - want * Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff();
        track.feed(dev / std::max(1.0, std::abs(want)), label);
      }
  }
  return track.report("gram-quasi-multiplication", p, d, 1e-10);
}

// The Gram-weighted basis multiplies like matrix units. Dense operator
// products at two letters; at three letters the law lives entirely in the
// coefficient algebra, so the pseudo-inverse identities and the null-space
// bookkeeping carry the whole statement.
inline VerificationReport pure_basis_law_check(int p, int d) {
  if (p != 2 && p != 3) throw std::invalid_argument("pure basis is checked at p = 2 or 3");
  DeviationTracker track;
  PureBasis basis = pure_basis(p, d);
  const int n = static_cast<int>(basis.index_set.size());
  if (p == 2) {
    std::vector<int> kept;
    for (int i = 0; i < n; ++i)
      if (std::find(basis.dropped.begin(), basis.dropped.end(), i) == basis.dropped.end())
        kept.push_back(i);
    std::vector<DenseOperator> e;
    for (int a : kept)
      for (int b : kept) e.push_back(pure_basis_element(basis, a, b));
    const int m = static_cast<int>(kept.size());
    for (int ga = 0; ga < m; ++ga)
      for (int de = 0; de < m; ++de)
        for (int la = 0; la < m; ++la)
          for (int pi = 0; pi < m; ++pi) {
            const DenseOperator lhs = e[ga * m + de] * e[la * m + pi];
            std::string label = "pure " + std::to_string(ga) + std::to_string(de) +
                                std::to_string(la) + std::to_string(pi);
            if (de == la)
              track.feed(lhs, e[ga * m + pi], label);
            else
              track.feed(max_abs(lhs), label);
          }
  } else {
    Eigen::MatrixXd g = gram_matrix(p, d).entries;
    const Eigen::MatrixXd& b = basis.inverse;
    double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    track.feed((g * b * g - g).cwiseAbs().maxCoeff(), "G B G = G");
    track.feed((b * g * b - b).cwiseAbs().maxCoeff() / scale, "B G B = B");
    long nulls = 0;
    for (int i = 0; i < basis.spectrum.size(); ++i)
      if (basis.spectrum(i) < 1e-9) ++nulls;
    track.feed(std::abs(static_cast<double>(nulls - static_cast<long>(basis.dropped.size()))),
               "null count");
    bool degenerate = !gram_invertibility(p, d).invertible;
    track.feed(degenerate == !basis.dropped.empty() ? 0.0 : 1.0, "degeneracy flag");
  }
  return track.report("pure-basis-law", p, d, 1e-9);
}

// Products of arc-layer elements traced against each other agree with the
// contracted small-system pairing. Exhaustive at two letters, sampled at
// three.
inline VerificationReport overlap_reduction_check(int p, int d) {
  if (p != 2 && p != 3) throw std::invalid_argument("overlap reduction is checked at p = 2 or 3");
  DeviationTracker track;
  auto lr = Orientation::LeftToRight;
  auto rl = Orientation::RightToLeft;
  if (p == 2) {
    auto lefts = unit_labels(2, lr);
    auto rights = unit_labels(2, rl);
    for (auto [r, s] : {std::pair{0, 1}, {0, 2}, {1, 2}})
      for (const UnitLabel& al : lefts)
        for (const UnitLabel& ar : rights)
          for (const UnitLabel& bl : lefts)
            for (const UnitLabel& br : rights) {
              OverlapValue v = overlap(r, s, al, ar, bl, br, d);
              track.feed(std::abs(v.dense - v.reduced) /
                             std::max({1.0, std::abs(v.dense), std::abs(v.reduced)}),
                         "r=" + std::to_string(r) + " s=" + std::to_string(s));
            }
  } else {
    Partition hook{{2, 1}}, top{{3}};
    BranchPath sp = detail::child_path(hook, Partition{{2}});
    BranchPath ap = detail::child_path(hook, Partition{{1, 1}});
    UnitLabel ss_l{hook, sp, sp, lr}, ss_r{hook, sp, sp, rl};
    for (auto [r, s] : {std::pair{0, 2}, {1, 2}, {2, 3}}) {
      OverlapValue v = overlap(r, s, ss_l, ss_r, ss_l, ss_r, d);
      track.feed(std::abs(v.dense - v.reduced) /
                     std::max({1.0, std::abs(v.dense), std::abs(v.reduced)}),
                 "hook r=" + std::to_string(r) + " s=" + std::to_string(s));
    }
    UnitLabel sa_l{hook, sp, ap, lr};
    UnitLabel as_l{hook, ap, sp, lr};
    OverlapValue chained = overlap(1, 2, sa_l, ss_r, as_l, ss_r, d);
    track.feed(std::abs(chained.dense - chained.reduced), "chained");
    OverlapValue broken = overlap(1, 2, sa_l, ss_r, sa_l, ss_r, d);
    track.feed(std::abs(broken.dense), "broken dense");
    track.feed(std::abs(broken.reduced), "broken reduced");
    UnitLabel t_l{top, detail::child_path(top, Partition{{2}}),
                  detail::child_path(top, Partition{{2}}), lr};
    UnitLabel t_r{top, detail::child_path(top, Partition{{2}}),
                  detail::child_path(top, Partition{{2}}), rl};
    OverlapValue crossed = overlap(1, 2, t_l, t_r, ss_l, ss_r, d);
    track.feed(std::abs(crossed.dense), "crossed");
  }
  return track.report("overlap-reduction", p, d, 1e-9);
}

// The three layer families multiply as units within a layer and annihilate
// across layers.
inline VerificationReport layer_unit_law_check(int d) {
  DeviationTracker track;
  constexpr Letter ls[2] = {Letter::S, Letter::A};
  for (Letter i : ls)
    for (Letter j : ls)
      for (Letter k : ls)
        for (Letter l : ls) {
          std::string tag = letter_pair_key(i, j) + "*" + letter_pair_key(k, l);
          DenseOperator top = g2_unit(i, j, d) * g2_unit(k, l, d);
          if (j == k)
            track.feed(top, g2_unit(i, l, d), "top " + tag);
          else
            track.feed(max_abs(top), "top " + tag);
          if (!g0_vanishes(i, j, d) && !g0_vanishes(k, l, d)) {
            DenseOperator bottom = g0_unit(i, j, d) * g0_unit(k, l, d);
            if (j == k && !g0_vanishes(i, l, d))
              track.feed(bottom, g0_unit(i, l, d), "bottom " + tag);
            else
              track.feed(max_abs(bottom), "bottom " + tag);
          }
        }
  for (Sector a : all_sectors())
    for (Sector b : all_sectors()) {
      if (g1_vanishes(a, b, d)) continue;
      for (Sector c : all_sectors())
        for (Sector e : all_sectors()) {
          if (g1_vanishes(c, e, d)) continue;
          std::string tag = sector_pair_key(a, b) + "*" + sector_pair_key(c, e);
          DenseOperator deep = g1_unit(a, b, d) * g1_unit(c, e, d);
          if (b == c)
            track.feed(deep, g1_unit(a, e, d), "deep " + tag);
          else
            track.feed(max_abs(deep), "deep " + tag);
        }
      track.feed(max_abs(g2_unit(Letter::S, Letter::S, d) * g1_unit(a, b, d)),
                 "top*deep " + sector_pair_key(a, b));
    }
  return track.report("layer-unit-law", 2, d, 1e-10);
}

// The layer projectors are orthogonal idempotents resolving the identity and
// absorbing their own units.
inline VerificationReport layer_projector_check(int d) {
  DeviationTracker track;
  LayerProjectors pr = projectors(d);
  track.feed(pr.g2 * pr.g2, pr.g2, "top idempotent");
  track.feed(pr.g1 * pr.g1, pr.g1, "deep idempotent");
  track.feed(pr.g0 * pr.g0, pr.g0, "bottom idempotent");
  track.feed(max_abs(pr.g2 * pr.g1), "top*deep");
  track.feed(max_abs(pr.g2 * pr.g0), "top*bottom");
  track.feed(max_abs(pr.g1 * pr.g0), "deep*bottom");
  track.feed(pr.g2 + pr.g1 + pr.g0, DenseOperator::identity(d, 4), "resolution");
  for (Letter i : {Letter::S, Letter::A})
    for (Letter j : {Letter::S, Letter::A})
      if (!g0_vanishes(i, j, d)) {
        track.feed(max_abs(pr.g2 * g0_unit(i, j, d)), "top kills bottom");
        track.feed(max_abs(pr.g1 * g0_unit(i, j, d)), "deep kills bottom");
      }
  return track.report("layer-projectors", 2, d, 1e-10);
}

// The declared block structure accounts for exactly the dense span: the sum
// of block dimensions equals the rank of the flipped permutation family.
inline VerificationReport block_decomposition_check(int d) {
  Decomposition22 dec = decompose_22(d);
  std::string shape;
  int scalars = 0;
  for (const Block22& b : dec.blocks) {
    if (b.matrix) {
      if (!shape.empty()) shape += " + ";
      shape += "M(" + std::to_string(b.size) + ")";
    } else {
      ++scalars;
    }
  }
  if (scalars > 0) shape += " + " + std::to_string(scalars) + " scalar";
  shape += ", dim " + std::to_string(dec.total_dimension) + ", span rank " +
           std::to_string(dec.dense_span_rank);
  double dev = std::abs(dec.total_dimension - dec.dense_span_rank);
  return make_report("block-decomposition", 2, d, dev, 0.5,
                     static_cast<long>(dec.blocks.size()), shape);
}

// Every unit of every shape at this letter count, peeled one letter down.
inline VerificationReport unit_peel_check(int p, int d) {
  std::vector<VerificationReport> parts;
  for (const Partition& mu : enumerate_partitions(p)) {
    auto table = young_yamanouchi(mu, Orientation::LeftToRight);
    for (int i = 1; i <= table->dimension(); ++i)
      for (int j = 1; j <= table->dimension(); ++j)
        parts.push_back(unit_decomposition_lemma(mu, i, j, p, d));
  }
  return detail::merge_reports("unit-peel-decomposition", p, d, 1e-10, parts);
}

// Squeeze every admissible pair and take the worst residual; a closed-form
// versus extraction mismatch surfaces as an infinite deviation with the
// thrown message attached.
inline VerificationReport squeeze_residual_check(int d, bool dense_residual) {
  const std::string claim = dense_residual ? "squeeze-dense-residual" : "squeeze-residual";
  DeviationTracker track;
  try {
    for (const SqueezeExpansion& sq : squeeze_sweep(d, dense_residual))
      track.feed(sq.residual, sq.left.to_string() + " x " + sq.right.to_string());
  } catch (const std::logic_error& err) {
    return make_report(claim, 3, d, std::numeric_limits<double>::infinity(), 1e-9, 0, err.what());
  }
  return track.report(claim, 3, d, 1e-9);
}

inline VerificationReport squeeze_extraction_check(int d) {
  Partition three{{3}}, hook{{2, 1}}, column{{1, 1, 1}};
  std::vector<std::pair<S3Unit, S3Unit>> picks = {
      {S3Unit{three, Letter::S, Letter::S}, S3Unit{three, Letter::S, Letter::S}},
      {S3Unit{hook, Letter::S, Letter::A}, S3Unit{hook, Letter::S, Letter::A}},
      {S3Unit{column, Letter::A, Letter::A}, S3Unit{hook, Letter::A, Letter::S}},
  };
  std::vector<VerificationReport> parts;
  for (const auto& [l, r] : picks) parts.push_back(extraction_identity_check(l, r, d));
  return detail::merge_reports("squeeze-extraction-pairing", 3, d, 1e-10, parts);
}

// ---- suite registry ----

struct SuiteCheck {
  std::string key;  // claim id with effective letters and dimension
  std::function<VerificationReport()> run;
};

inline std::vector<std::string> suite_names() {
  return {"units", "q", "gram", "a22", "squeeze", "appendix", "all"};
}

inline bool is_suite(const std::string& name) {
  auto names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

inline std::vector<SuiteCheck> suite_checks(const std::string& suite, int p, int d) {
  auto entry = [&](const std::string& claim, int cp, int cd,
                   std::function<VerificationReport()> fn) {
    return SuiteCheck{claim + "/" + std::to_string(cp) + "/" + std::to_string(cd),
                      std::move(fn)};
  };
  std::vector<SuiteCheck> out;
  if (suite == "units") {
    out.push_back(entry("unit-product-law", p, d, [=] { return unit_product_law_check(p, d); }));
    out.push_back(entry("unit-trace-law", p, d, [=] { return unit_trace_check(p, d); }));
  } else if (suite == "q") {
    out.push_back(entry("arc-multiplication", p, d, [=] { return arc_multiplication_check(p, d); }));
    out.push_back(entry("depth-projectors", p, d, [=] { return q_projector_check(p, d); }));
    out.push_back(entry("deep-arc-sandwich", p, d, [=] { return arc_sandwich_check(p, d); }));
    out.push_back(
        entry("depth-projector-sandwich", p, d, [=] { return q_sandwich_check(p, d); }));
  } else if (suite == "gram") {
    out.push_back(entry("gram-quasi-multiplication", p, d,
                        [=] { return gram_quasi_multiplication_check(p, d); }));
    out.push_back(entry("pure-basis-law", p, d, [=] { return pure_basis_law_check(p, d); }));
    out.push_back(
        entry("overlap-reduction", p, d, [=] { return overlap_reduction_check(p, d); }));
  } else if (suite == "a22") {
    out.push_back(entry("layer-unit-law", 2, d, [=] { return layer_unit_law_check(d); }));
    out.push_back(entry("layer-projectors", 2, d, [=] { return layer_projector_check(d); }));
    out.push_back(entry("block-decomposition", 2, d, [=] { return block_decomposition_check(d); }));
    out.push_back(
        entry("bottom-sandwiches-not-ideal", 2, d, [=] { return n0_not_ideal_witness(d); }));
  } else if (suite == "squeeze") {
    out.push_back(entry("single-arc-trace", 3, d, [=] { return single_arc_trace_check(3, d); }));
    out.push_back(
        entry("wall-arc-conjugation", 3, d, [=] { return arc_conjugation_facts(3, d); }));
    out.push_back(entry("unit-peel-decomposition", 3, d, [=] { return unit_peel_check(3, d); }));
    out.push_back(entry("squeeze-residual", 3, d, [=] { return squeeze_residual_check(d, false); }));
    out.push_back(
        entry("squeeze-extraction-pairing", 3, d, [=] { return squeeze_extraction_check(d); }));
  } else if (suite == "appendix") {
    out.push_back(
        entry("contraction-factorization", p, d, [=] { return contraction_check(p, d); }));
    out.push_back(entry("deep-arc-unit-trace", p, d, [=] { return arc_unit_trace_check(p, d); }));
    out.push_back(entry("deep-arc-sandwich", p, d, [=] { return arc_sandwich_check(p, d); }));
    out.push_back(
        entry("depth-projector-sandwich", p, d, [=] { return q_sandwich_check(p, d); }));
    out.push_back(entry("single-arc-trace", p, d, [=] { return single_arc_trace_check(p, d); }));
    out.push_back(
        entry("wall-arc-conjugation", p, d, [=] { return arc_conjugation_facts(p, d); }));
    out.push_back(entry("unit-peel-decomposition", p, d, [=] { return unit_peel_check(p, d); }));
  } else if (suite == "all") {
    for (const std::string& name : suite_names()) {
      if (name == "all") continue;
      for (SuiteCheck& c : suite_checks(name, p, d)) out.push_back(std::move(c));
    }
  } else {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  return out;
}

// Run a named suite, skipping duplicate checks, reports sorted by claim id.
inline std::vector<VerificationReport> run_suite(const std::string& suite, int p, int d) {
  std::set<std::string> seen;
  std::vector<VerificationReport> out;
  for (const SuiteCheck& c : suite_checks(suite, p, d)) {
    if (!seen.insert(c.key).second) continue;
    out.push_back(c.run());
  }
  std::sort(out.begin(), out.end(), [](const VerificationReport& a, const VerificationReport& b) {
    return std::tie(a.claim_id, a.p, a.d) < std::tie(b.claim_id, b.p, b.d);
  });
  return out;
}

}  // namespace wba
