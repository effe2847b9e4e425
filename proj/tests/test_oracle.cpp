#include "doctest.h"

#include "oracles.hpp"
#include "wba/matrix_units.hpp"
#include "wba/oracle.hpp"

using wba::DenseOperator;
using wba::Partition;

TEST_CASE("dense_gram of the two projector basis") {
  DenseOperator pp = wba::max_entangled_projector(3);
  DenseOperator rest = DenseOperator::identity(3, 2) - pp;
  Eigen::MatrixXd g = wba::dense_gram({rest, pp});
  CHECK(g(0, 0) == doctest::Approx(8.0));
  CHECK(g(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(g(0, 1)) < 1e-13);
  CHECK(g(1, 0) == g(0, 1));
}

TEST_CASE("dense_gram is positive semidefinite") {
  std::vector<DenseOperator> family;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) family.push_back(wba::matrix_unit(Partition{2, 1}, i, j, 3));
  Eigen::MatrixXd g = wba::dense_gram(family);
  CHECK((g - g.transpose()).cwiseAbs().maxCoeff() < 1e-11);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  CHECK(es.eigenvalues().minCoeff() > -1e-11);
}

TEST_CASE("span_rank ignores duplication, order, and linear combinations") {
  DenseOperator a = wba::matrix_unit(Partition{2}, 1, 1, 3);
  DenseOperator b = wba::matrix_unit(Partition{1, 1}, 1, 1, 3);
  CHECK(wba::span_rank({a, b}) == 2);
  CHECK(wba::span_rank({b, a, b}) == 2);
  CHECK(wba::span_rank({a, b, a + (-2.0) * b}) == 2);
  CHECK(wba::span_rank({a}) == 1);
}

TEST_CASE("assert_equal reports deviations and rejects perturbations") {
  DenseOperator a = wba::matrix_unit(Partition{2}, 1, 1, 3);
  auto same = wba::assert_equal(a, a, "self-comparison", 1e-12);
  CHECK(same.pass);
  CHECK(same.max_abs_deviation == 0.0);

  DenseOperator broken = a;
  broken.m(0, 0) += 1e-6;  // deliberate defect: must be caught, not absorbed
  auto r = wba::assert_equal(a, broken, "negative-control", 1e-9);
  CHECK(!r.pass);
  CHECK(r.max_abs_deviation == doctest::Approx(1e-6));
}

TEST_CASE("large coefficient comparisons are judged relatively") {
  DenseOperator a = 1e6 * wba::matrix_unit(Partition{2}, 1, 1, 3);
  DenseOperator b = a;
  b.m(0, 0) += 1e-7;
  auto r = wba::assert_equal(a, b, "scaled-comparison", 1e-12);
  CHECK(r.max_abs_deviation < 1e-12);
  CHECK(r.pass);
}
