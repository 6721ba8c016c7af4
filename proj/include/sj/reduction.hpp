#pragma once

#include <vector>

#include "sj/groups.hpp"

namespace sj {

// Vectors a with ||a||_inf <= this bound are the (M.1) certification set.
constexpr int kMinkowskiBound = 3;

struct MinkowskiResult {
  RMatrix reduced;  // U Y tU
  RMatrix u;        // unimodular, integer entries
};

// Y real symmetric positive definite, n <= 3 (larger n only with allow_heuristic).
MinkowskiResult minkowski_reduce(const RMatrix& y, bool allow_heuristic = false);

// (M.1) over ||a||_inf <= bound: a Y ta >= y_kk (1 - 1e-12) whenever gcd(a_k..a_n) = 1.
// Returns the number of violating (k, a) pairs.
int minkowski_violations(const RMatrix& y, int bound = kMinkowskiBound);
// (M.2): y_{k,k+1} >= 0, exact.
bool minkowski_m2(const RMatrix& y);

struct ReductionCertificate {
  SymplecticElement gamma;
  HeisenbergElement heisenberg;  // Jacobi reduction only
  int iterations = 0;
  int candidates = 0;
  int enumeration_bound = kMinkowskiBound;
  bool m1 = false;  // over the enumeration box
  bool m2 = false;
  bool s1 = false;  // over the candidate set
  bool s3 = false;
  bool lambda_mu_in_unit_box = false;  // Jacobi reduction only
  std::vector<double> det_im;         // along the iteration, non-decreasing
};

json to_json(const ReductionCertificate& c);

// Candidate set for (S.1): words of length <= 3 in t(+-E), g(permutation), sigma_n,
// plus the partial inversions on every nonempty coordinate subset.
const std::vector<SymplecticElement>& siegel_candidates(int n);

// min over the candidate set of |det(C Omega + D)|; (S.1) holds on the set iff >= 1.
double min_candidate_factor(const SiegelPoint& p);

struct SiegelReduction {
  SiegelPoint point;
  ReductionCertificate cert;
};
SiegelReduction siegel_reduce(const SiegelPoint& p, int max_iterations = 200);

struct JacobiReduction {
  JacobiPoint point;
  ReductionCertificate cert;
  RMatrix lambda;  // Z = lambda + mu Omega after reduction
  RMatrix mu;
};
JacobiReduction jacobi_reduce(const JacobiPoint& p, int max_iterations = 200);

// Re-applies the certificate; returns max |gamma . input - output|.
double verify_certificate(const SiegelPoint& input, const SiegelReduction& r);
double verify_certificate(const JacobiPoint& input, const JacobiReduction& r);

}  // namespace sj
