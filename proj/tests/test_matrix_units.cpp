#include "doctest.h"

#include <complex>

#include "oracles.hpp"
#include "wba/matrix_units.hpp"

using wba::DenseOperator;
using wba::Orientation;
using wba::Partition;
using wba::Permutation;
using wba::UnitLabel;
using cplx = std::complex<double>;

TEST_CASE("single letter unit is the identity") {
  for (int d = 2; d <= 4; ++d)
    CHECK(wba::max_abs_dev(wba::matrix_unit(Partition{1}, 1, 1, d),
                           DenseOperator::identity(d, 1)) < 1e-15);
}

TEST_CASE("two letter units are the symmetric and antisymmetric projectors") {
  for (int d = 2; d <= 3; ++d) {
    DenseOperator swap = wba::perm_operator(Permutation({2, 1}), d, 2);
    DenseOperator id = DenseOperator::identity(d, 2);
    CHECK(wba::max_abs_dev(wba::matrix_unit(Partition{2}, 1, 1, d), 0.5 * (id + swap)) < 1e-14);
    CHECK(wba::max_abs_dev(wba::matrix_unit(Partition{1, 1}, 1, 1, d), 0.5 * (id - swap)) < 1e-14);
  }
}

TEST_CASE("unit product and trace laws") {
  for (int p = 1; p <= 3; ++p)
    for (int d = 2; d <= 3; ++d) {
      auto products = wba::unit_product_law_check(p, d);
      CHECK(products.pass);
      CHECK(products.max_abs_deviation <= 1e-12);
      auto traces = wba::unit_trace_check(p, d);
      CHECK(traces.pass);
    }
  CHECK(wba::unit_product_law_check(2, 4).pass);
  CHECK(wba::unit_trace_check(2, 4).pass);
}

TEST_CASE("diagonal units resolve the identity and have multiplicity rank") {
  for (int p = 2; p <= 3; ++p)
    for (int d = 2; d <= 4; ++d) {
      DenseOperator sum = DenseOperator::zero(d, p);
      for (const Partition& mu : wba::enumerate_partitions(p)) {
        auto table = wba::young_yamanouchi(mu, Orientation::LeftToRight);
        for (int i = 1; i <= table->dimension(); ++i) {
          const DenseOperator& e = wba::matrix_unit(mu, i, i, d);
          sum = sum + e;
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e.m);
          int rank = (es.eigenvalues().array() > 0.5).count();
          CHECK(rank == mu.multiplicity(d));
        }
      }
      CHECK(wba::max_abs_dev(sum, DenseOperator::identity(d, p)) < 1e-12);
    }
}

TEST_CASE("units vanish exactly when the diagram is too tall") {
  CHECK(wba::max_abs(wba::matrix_unit(Partition{1, 1, 1}, 1, 1, 2)) < 1e-14);
  CHECK(wba::max_abs(wba::matrix_unit(Partition{1, 1}, 1, 1, 1)) < 1e-14);
}

TEST_CASE("units are hermitian conjugates across the diagonal") {
  for (const UnitLabel& a : wba::unit_labels(3)) {
    UnitLabel flipped{a.mu, a.col, a.row, a.orient};
    CHECK(wba::max_abs_dev(wba::adjoint(wba::matrix_unit(a, 3)), wba::matrix_unit(flipped, 3)) <
          1e-13);
  }
}

TEST_CASE("permutation operators expand over the units") {
  auto coeffs_id = wba::expand_permutation(Permutation::identity(2), 2);
  for (const auto& c : coeffs_id) CHECK(c.value == doctest::Approx(c.i == c.j ? 1.0 : 0.0));

  for (const auto& c : wba::expand_permutation(Permutation({2, 1}), 2)) {
    if (c.mu == Partition{2}) CHECK(c.value == doctest::Approx(1.0));
    if (c.mu == Partition{1, 1}) CHECK(c.value == doctest::Approx(-1.0));
  }

  for (int d = 2; d <= 3; ++d)
    for (const Permutation& s : wba::enumerate_group(3)) {
      DenseOperator sum = DenseOperator::zero(d, 3);
      for (const auto& c : wba::expand_permutation(s, 3))
        sum = sum + c.value * wba::matrix_unit(c.mu, c.i, c.j, d);
      CHECK(wba::max_abs_dev(sum, wba::perm_operator(s, d, 3)) < 1e-12);
    }
}

TEST_CASE("conjugation by a permutation stays inside the shape block") {
  int d = 3;
  for (const Permutation& s : wba::enumerate_group(3)) {
    for (const UnitLabel& a : wba::unit_labels(3)) {
      if (!(a.mu == Partition{2, 1})) continue;
      DenseOperator v = wba::perm_operator(s, d, 3);
      DenseOperator lhs = v * wba::matrix_unit(a, d) * wba::perm_operator(s.inverse(), d, 3);
      DenseOperator rhs = DenseOperator::zero(d, 3);
      for (const auto& [kl, coeff] : wba::conjugate_unit(s, a))
        rhs = rhs + coeff * wba::matrix_unit(a.mu, kl.first, kl.second, d);
      CHECK(wba::max_abs_dev(lhs, rhs) < 1e-12);
      CHECK(std::abs(lhs.trace() - wba::matrix_unit(a, d).trace()) < 1e-12);
    }
  }

  auto id_coeffs = wba::conjugate_unit(Permutation::identity(3), wba::unit_label(Partition{2, 1}, 1, 2));
  for (const auto& [kl, coeff] : id_coeffs)
    CHECK(coeff == doctest::Approx(kl.first == 1 && kl.second == 2 ? 1.0 : 0.0));
}

TEST_CASE("the two orientations are conjugate through the reversal") {
  for (int p = 2; p <= 3; ++p)
    for (int d = 2; d <= 3; ++d) {
      DenseOperator vr = wba::perm_operator(Permutation::reversal(p), d, p);
      for (const Partition& mu : wba::enumerate_partitions(p)) {
        auto table = wba::young_yamanouchi(mu, Orientation::LeftToRight);
        for (int i = 1; i <= table->dimension(); ++i)
          for (int j = 1; j <= table->dimension(); ++j) {
            const DenseOperator& rl = wba::matrix_unit(mu, i, j, d, Orientation::RightToLeft);
            DenseOperator expected = vr * wba::matrix_unit(mu, i, j, d) * vr;
            CHECK(wba::max_abs_dev(rl, expected) < 1e-13);
          }
      }
    }
}

TEST_CASE("tracing the construction-final slot steps one box down") {
  // two letters: the symmetric projector reduces with constant (d+1)/2
  for (int d = 2; d <= 3; ++d) {
    auto down = wba::trace_last_unit(wba::unit_label(Partition{2}, 1, 1), d);
    CHECK(down.coefficient == doctest::Approx((d + 1) / 2.0));
    CHECK(down.residual < 1e-13);
  }

  // mismatched penultimate shapes trace to zero
  auto off = wba::trace_last_unit(wba::unit_label(Partition{2, 1}, 1, 2), 3);
  CHECK(off.coefficient == 0.0);
  CHECK(off.residual < 1e-13);
  CHECK(!off.reduced.has_value());

  // measured constant agrees with the multiplicity ratio wherever defined
  for (int p = 2; p <= 3; ++p)
    for (int d = 2; d <= 4; ++d)
      for (Orientation orient : {Orientation::LeftToRight, Orientation::RightToLeft})
        for (const UnitLabel& a : wba::unit_labels(p, orient)) {
          if (a.row.penultimate() != a.col.penultimate()) continue;
          auto down = wba::trace_last_unit(a, d);
          CHECK(down.residual < 1e-12);
          const Partition& alpha = a.row.penultimate();
          if (alpha.multiplicity(d) > 0) {
            double ratio =
                static_cast<double>(a.mu.multiplicity(d)) / alpha.multiplicity(d);
            CHECK(down.coefficient == doctest::Approx(ratio).epsilon(1e-10));
          } else {
            CHECK(down.coefficient == 0.0);
          }
        }

  CHECK_THROWS_WITH(wba::trace_last_unit(wba::unit_label(Partition{2}, 1, 1), 2, 1),
                    "trace incompatible with construction order");
  CHECK_NOTHROW(wba::trace_last_unit(
      wba::unit_label(Partition{2}, 1, 1, Orientation::RightToLeft), 2, 1));
}
