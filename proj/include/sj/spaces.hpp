#pragma once

#include "sj/linalg.hpp"

namespace sj {

// Point of the Siegel upper half space H_n.
struct SiegelPoint {
  CMatrix omega;

  SiegelPoint() = default;
  // Symmetrizes small asymmetry, throws DomainError otherwise or when Im omega is not > 0.
  explicit SiegelPoint(const CMatrix& omega, Tolerance tol = {});

  int n() const { return static_cast<int>(omega.rows()); }
  RMatrix y() const { return omega.imag(); }
  RMatrix x() const { return omega.real(); }
};

// Point of H_{n,m} = H_n x C^{(m,n)}.
struct JacobiPoint {
  CMatrix omega;
  CMatrix z;  // m x n

  JacobiPoint() = default;
  JacobiPoint(const CMatrix& omega, const CMatrix& z, Tolerance tol = {});

  int n() const { return static_cast<int>(omega.rows()); }
  int m() const { return static_cast<int>(z.rows()); }
  SiegelPoint siegel() const;
};

// Point of the generalized unit disk D_n.
struct DiskPoint {
  CMatrix w;

  DiskPoint() = default;
  explicit DiskPoint(const CMatrix& w, Tolerance tol = {});

  int n() const { return static_cast<int>(w.rows()); }
};

// Point of D_{n,m} = D_n x C^{(m,n)}.
struct JacobiDiskPoint {
  CMatrix w;
  CMatrix eta;  // m x n

  JacobiDiskPoint() = default;
  JacobiDiskPoint(const CMatrix& w, const CMatrix& eta, Tolerance tol = {});

  int n() const { return static_cast<int>(w.rows()); }
  int m() const { return static_cast<int>(eta.rows()); }
  DiskPoint disk() const;
};

// (dOmega, dZ). dOmega is symmetrized on construction; dZ may be empty (0 x n)
// for tangents of H_n or D_n.
struct TangentVector {
  CMatrix d_omega;
  CMatrix d_z;

  TangentVector() = default;
  TangentVector(const CMatrix& d_omega, const CMatrix& d_z);
  explicit TangentVector(const CMatrix& d_omega);
};

bool validate(const SiegelPoint& p, Tolerance tol = {});
bool validate(const JacobiPoint& p, Tolerance tol = {});
bool validate(const DiskPoint& p, Tolerance tol = {});
bool validate(const JacobiDiskPoint& p, Tolerance tol = {});

json to_json(const SiegelPoint& p);
json to_json(const JacobiPoint& p);
json to_json(const DiskPoint& p);
json to_json(const JacobiDiskPoint& p);
json to_json(const TangentVector& t);

SiegelPoint siegel_from_json(const json& j);
JacobiPoint jacobi_from_json(const json& j);
DiskPoint disk_from_json(const json& j);
JacobiDiskPoint jacobi_disk_from_json(const json& j);
TangentVector tangent_from_json(const json& j);

}  // namespace sj
