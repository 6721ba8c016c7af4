#include "sj/cayley.hpp"

namespace sj {

SiegelPoint cayley(const DiskPoint& w) {
  const int n = w.n();
  CMatrix inv = inverse(CMatrix(identity(n) - w.w));
  SiegelPoint p;
  p.omega = symmetrize(CMatrix(kI * (identity(n) + w.w) * inv));
  return p;
}

DiskPoint cayley_inverse(const SiegelPoint& p) {
  const int n = p.n();
  CMatrix inv = inverse(CMatrix(p.omega + kI * identity(n)));
  DiskPoint w;
  w.w = symmetrize(CMatrix((p.omega - kI * identity(n)) * inv));
  return w;
}

JacobiPoint partial_cayley(const JacobiDiskPoint& p) {
  const int n = p.n();
  CMatrix inv = inverse(CMatrix(identity(n) - p.w));
  JacobiPoint r;
  r.omega = symmetrize(CMatrix(kI * (identity(n) + p.w) * inv));
  r.z = 2.0 * kI * p.eta * inv;
  return r;
}

JacobiDiskPoint partial_cayley_inverse(const JacobiPoint& p) {
  const int n = p.n();
  CMatrix inv = inverse(CMatrix(p.omega + kI * identity(n)));
  JacobiDiskPoint r;
  r.w = symmetrize(CMatrix((p.omega - kI * identity(n)) * inv));
  r.eta = p.z * inv;
  return r;
}

TangentVector partial_cayley_differential(const JacobiDiskPoint& p, const TangentVector& t) {
  const int n = p.n();
  CMatrix inv = inverse(CMatrix(identity(n) - p.w));
  // Phi(W) = -iI + 2i (I-W)^-1
  CMatrix d_inv = inv * t.d_omega * inv;
  CMatrix dz = 2.0 * kI * p.eta * d_inv;
  if (t.d_z.size() != 0) dz += 2.0 * kI * t.d_z * inv;
  return TangentVector(2.0 * kI * d_inv, dz);
}

}  // namespace sj
