#pragma once

#include <vector>

#include "sj/spaces.hpp"

namespace sj {

// (W0 - W1)(W0 - conj W1)^-1 (conj W0 - conj W1)(conj W0 - W1)^-1
CMatrix cross_ratio(const SiegelPoint& p0, const SiegelPoint& p1);

// Ascending real eigenvalues of the cross ratio, each in [0, 1).
// Throws NumericError if an imaginary part exceeds 1e-9 or a value leaves [0, 1).
std::vector<double> cross_ratio_eigenvalues(const SiegelPoint& p0, const SiegelPoint& p1);

double siegel_distance(const SiegelPoint& p0, const SiegelPoint& p1);

// rho^2 from the matrix series sigma(4 R (sum_k R^k / (2k+1))^2), truncated once
// the tail bound drops below tail_tol.
struct SeriesDistance {
  double rho_squared;
  int terms;
};
SeriesDistance distance_squared_series(const SiegelPoint& p0, const SiegelPoint& p1, double tail_tol = 1e-14);

// i diag(a_1^t, ..., a_n^t); requires sum (log a_k)^2 = 1 within 1e-8.
SiegelPoint special_geodesic(const std::vector<double>& a, double t);

}  // namespace sj
