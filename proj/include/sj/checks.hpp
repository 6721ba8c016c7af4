#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sj/theta.hpp"

namespace sj {

// One comparison. lhs/rhs hold the compared quantity (max-abs entry for matrices).
struct CheckRow {
  std::string id;
  std::string lhs;
  std::string rhs;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct CheckOptions {
  std::uint64_t seed = 1;
  double tol_scale = 1.0;  // clamped below at 1
};

// Acceptance batteries 1..10.
std::vector<CheckRow> run_criterion(int k, const CheckOptions& opts);
std::string criterion_title(int k);

// actions, cayley, metrics, laplacians, distance, reduction, jacobiforms, theta
const std::vector<std::string>& check_suites();
// Unknown names raise ParameterError.
std::vector<CheckRow> run_check_suite(const std::string& name, const CheckOptions& opts);

// Header case,lhs,rhs,residual,tol,pass; numbers in %.17g.
std::string rows_to_csv(const std::vector<CheckRow>& rows);
std::string format_number(double x);
std::string format_complex(cplx z);

// One transformation law of the theta sum at (c, h): jacobi1, jacobi2, jacobi3, gamma2.
// jacobi2 uses s = 1, jacobi3 uses lambda0 = mu0 = 1 and kappa0 = 0, gamma2 compares
// |Theta_f|^2 at the point and at its image under S. jacobi1 needs det M = 1.
CheckRow theta_law(const std::string& law, const GridFunction& f, const ThetaContext& ctx, const SL2Coord& c,
                   const HeisenbergElement& h, double tol_scale = 1.0);

}  // namespace sj
