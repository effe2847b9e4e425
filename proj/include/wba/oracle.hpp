#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "wba/dense_operator.hpp"
#include "wba/report.hpp"

namespace wba {

// Matrix of Frobenius pairings of a family of equal-shape operators. All
// operator families in this library have real pairings; a residual imaginary
// part above round-off is reported as an error.
inline Eigen::MatrixXd dense_gram(const std::vector<DenseOperator>& family) {
  if (family.empty()) throw std::invalid_argument("empty family");
  int n = static_cast<int>(family.size());
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::complex<double> v = frobenius(family[i], family[j]);
      if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
        throw std::runtime_error("family pairing is not real");
      g(i, j) = v.real();
      g(j, i) = v.real();
    }
  return g;
}

// Dimension of the span of the family: eigenvalue count of the pairing matrix
// above a relative cutoff.
inline int span_rank(const std::vector<DenseOperator>& family, double cutoff = 1e-9) {
  Eigen::MatrixXd g = dense_gram(family);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (top <= 0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > cutoff * top) ++rank;
  return rank;
}

// Entrywise comparison with the deviation scaled down by the largest entry
// magnitude when that magnitude exceeds one, so claims about operators with
// large coefficients are judged on relative error.
inline VerificationReport assert_equal(const DenseOperator& lhs, const DenseOperator& rhs,
                                       std::string claim_id, double tol, int p = 0, int d = 0,
                                       std::string detail = "") {
  double scale = std::max({1.0, max_abs(lhs), max_abs(rhs)});
  double dev = max_abs_dev(lhs, rhs) / scale;
  return make_report(std::move(claim_id), p, d, dev, tol, 1, std::move(detail));
}

// Running maximum used by sweep-style checks.
struct DeviationTracker {
  double worst = 0.0;
  long cases = 0;
  std::string worst_detail;

  void feed(double dev, const std::string& detail = "") {
    ++cases;
    if (dev > worst) {
      worst = dev;
      worst_detail = detail;
    }
  }
  void feed(const DenseOperator& lhs, const DenseOperator& rhs, const std::string& detail = "") {
    double scale = std::max({1.0, max_abs(lhs), max_abs(rhs)});
    feed(max_abs_dev(lhs, rhs) / scale, detail);
  }
  VerificationReport report(std::string claim_id, int p, int d, double tol) const {
    return make_report(std::move(claim_id), p, d, worst, tol, cases, worst_detail);
  }
};

}  // namespace wba
