#pragma once

#include <random>

#include "sj/cayley.hpp"
#include "sj/groups.hpp"

namespace sjt {

using sj::CMatrix;
using sj::cplx;

inline double uni(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CMatrix rand_real(std::mt19937_64& rng, int r, int c, double lo = -1.0, double hi = 1.0) {
  CMatrix a(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) a(i, k) = uni(rng, lo, hi);
  return a;
}

inline CMatrix rand_complex(std::mt19937_64& rng, int r, int c, double s = 1.0) {
  CMatrix a(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) a(i, k) = cplx(uni(rng, -s, s), uni(rng, -s, s));
  return a;
}

inline CMatrix rand_sym(std::mt19937_64& rng, int n, double s = 1.0) {
  CMatrix a = rand_real(rng, n, n, -s, s);
  return (a + a.transpose()) * 0.5;
}

inline CMatrix rand_spd(std::mt19937_64& rng, int n) {
  CMatrix a = rand_real(rng, n, n, -0.6, 0.6);
  return a * a.transpose() + (0.5 + uni(rng, 0.0, 1.0)) * CMatrix::Identity(n, n);
}

inline sj::SiegelPoint rand_siegel(std::mt19937_64& rng, int n) {
  return sj::SiegelPoint(CMatrix(rand_sym(rng, n) + sj::kI * rand_spd(rng, n)));
}

inline sj::JacobiPoint rand_jacobi_point(std::mt19937_64& rng, int n, int m) {
  sj::SiegelPoint s = rand_siegel(rng, n);
  return sj::JacobiPoint(s.omega, rand_complex(rng, m, n));
}

inline sj::DiskPoint rand_disk(std::mt19937_64& rng, int n) {
  return sj::cayley_inverse(rand_siegel(rng, n));
}

inline sj::JacobiDiskPoint rand_jacobi_disk(std::mt19937_64& rng, int n, int m) {
  return sj::partial_cayley_inverse(rand_jacobi_point(rng, n, m));
}

inline sj::TangentVector rand_tangent(std::mt19937_64& rng, int n, int m) {
  CMatrix d = rand_complex(rng, n, n);
  if (m == 0) return sj::TangentVector(CMatrix((d + d.transpose()) * 0.5));
  return sj::TangentVector(CMatrix((d + d.transpose()) * 0.5), rand_complex(rng, m, n));
}

inline double diff(const CMatrix& a, const CMatrix& b) { return sj::max_abs(a - b); }

}  // namespace sjt
