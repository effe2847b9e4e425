#pragma once

#include <string>
#include <vector>

namespace wba {

// Structured outcome of one verified claim.
struct VerificationReport {
  std::string claim_id;
  int p = 0;
  int d = 0;
  double max_abs_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  long n_cases = 0;
  std::string detail;  // free-form context, e.g. worst label
};

inline VerificationReport make_report(std::string claim_id, int p, int d, double deviation,
                                      double tolerance, long n_cases, std::string detail = "") {
  VerificationReport r;
  r.claim_id = std::move(claim_id);
  r.p = p;
  r.d = d;
  r.max_abs_deviation = deviation;
  r.tolerance = tolerance;
  r.pass = deviation <= tolerance;
  r.n_cases = n_cases;
  r.detail = std::move(detail);
  return r;
}

}  // namespace wba
