#include "sj/geodesics.hpp"

#include <algorithm>
#include <cmath>

namespace sj {

CMatrix cross_ratio(const SiegelPoint& p0, const SiegelPoint& p1) {
  if (p0.n() != p1.n()) throw DimensionError("cross_ratio: points of different degree");
  const CMatrix& a = p0.omega;
  const CMatrix& b = p1.omega;
  CMatrix ab = a.conjugate(), bb = b.conjugate();
  return (a - b) * inverse(CMatrix(a - bb)) * (ab - bb) * inverse(CMatrix(ab - b));
}

std::vector<double> cross_ratio_eigenvalues(const SiegelPoint& p0, const SiegelPoint& p1) {
  CMatrix r = cross_ratio(p0, p1);
  Eigen::ComplexEigenSolver<CMatrix> es(r, false);
  if (es.info() != Eigen::Success) throw NumericError("cross_ratio: eigensolver failed");
  std::vector<double> out;
  for (Eigen::Index k = 0; k < r.rows(); ++k) {
    cplx ev = es.eigenvalues()(k);
    if (std::abs(ev.imag()) > 1e-9)
      throw NumericError("cross_ratio: eigenvalue with imaginary part " + std::to_string(ev.imag()));
    double x = ev.real();
    if (x < -1e-9 || x >= 1.0) throw NumericError("cross_ratio: eigenvalue " + std::to_string(x) + " outside [0,1)");
    out.push_back(std::max(0.0, x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double siegel_distance(const SiegelPoint& p0, const SiegelPoint& p1) {
  double acc = 0.0;
  for (double r : cross_ratio_eigenvalues(p0, p1)) {
    double s = std::sqrt(r);
    double l = std::log1p(s) - std::log1p(-s);
    acc += l * l;
  }
  return std::sqrt(acc);
}

SeriesDistance distance_squared_series(const SiegelPoint& p0, const SiegelPoint& p1, double tail_tol) {
  std::vector<double> eig = cross_ratio_eigenvalues(p0, p1);
  const double rmax = eig.empty() ? 0.0 : eig.back();
  CMatrix r = cross_ratio(p0, p1);
  const int n = p0.n();
  CMatrix sum = identity(n), power = identity(n);
  int k = 0;
  // the neglected part of sum r^k/(2k+1) is below r^(k+1) / ((2k+3)(1-r)), times 8 r sum for the square
  const double sum_bound = 1.0 / (1.0 - rmax);
  while (true) {
    double tail = std::pow(rmax, k + 1) / ((2.0 * k + 3.0) * (1.0 - rmax));
    if (8.0 * n * rmax * sum_bound * tail < tail_tol) break;
    if (++k > 5000000) throw ConvergenceError("distance series: too many terms");
    power = power * r;
    sum += power / (2.0 * k + 1.0);
  }
  cplx v = (4.0 * r * sum * sum).trace();
  return {v.real(), k + 1};
}

SiegelPoint special_geodesic(const std::vector<double>& a, double t) {
  if (a.empty()) throw DimensionError("special_geodesic: empty parameter vector");
  double s = 0.0;
  for (double x : a) {
    if (!(x > 0)) throw ParameterError("special_geodesic: a_k must be positive");
    s += std::log(x) * std::log(x);
  }
  if (std::abs(s - 1.0) > 1e-8) throw ParameterError("special_geodesic: sum (log a_k)^2 must be 1");
  const int n = static_cast<int>(a.size());
  CMatrix w = zeros(n, n);
  for (int k = 0; k < n; ++k) w(k, k) = kI * std::pow(a[k], t);
  return SiegelPoint(w);
}

}  // namespace sj
