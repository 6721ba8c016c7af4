#include "sj/spaces.hpp"

namespace sj {

namespace {

CMatrix checked_symmetric(const CMatrix& a, Tolerance tol, const char* what) {
  require_square(a, what);
  if (!is_symmetric(a, tol)) throw DomainError(std::string(what) + ": matrix is not symmetric");
  return symmetrize(a);
}

bool im_positive(const CMatrix& omega, Tolerance tol) {
  CMatrix y = omega.imag().cast<cplx>();
  return is_positive_definite(symmetrize(y), tol);
}

bool disk_positive(const CMatrix& w, Tolerance tol) {
  const int n = static_cast<int>(w.rows());
  CMatrix h = identity(n) - w.conjugate() * w;
  return is_positive_definite((h + h.adjoint()) * 0.5, tol);
}

}  // namespace

SiegelPoint::SiegelPoint(const CMatrix& om, Tolerance tol)
    : omega(checked_symmetric(om, tol, "SiegelPoint")) {
  if (!im_positive(omega, tol)) throw DomainError("SiegelPoint: Im(omega) is not positive definite");
}

JacobiPoint::JacobiPoint(const CMatrix& om, const CMatrix& zz, Tolerance tol)
    : omega(checked_symmetric(om, tol, "JacobiPoint")), z(zz) {
  if (z.cols() != omega.rows() || z.rows() < 1)
    throw DimensionError("JacobiPoint: z must be m x n with n = deg(omega)");
  if (!im_positive(omega, tol)) throw DomainError("JacobiPoint: Im(omega) is not positive definite");
}

SiegelPoint JacobiPoint::siegel() const {
  SiegelPoint p;
  p.omega = omega;
  return p;
}

DiskPoint::DiskPoint(const CMatrix& ww, Tolerance tol) : w(checked_symmetric(ww, tol, "DiskPoint")) {
  if (!disk_positive(w, tol)) throw DomainError("DiskPoint: I - conj(W) W is not positive definite");
}

JacobiDiskPoint::JacobiDiskPoint(const CMatrix& ww, const CMatrix& e, Tolerance tol)
    : w(checked_symmetric(ww, tol, "JacobiDiskPoint")), eta(e) {
  if (eta.cols() != w.rows() || eta.rows() < 1)
    throw DimensionError("JacobiDiskPoint: eta must be m x n with n = deg(W)");
  if (!disk_positive(w, tol))
    throw DomainError("JacobiDiskPoint: I - conj(W) W is not positive definite");
}

DiskPoint JacobiDiskPoint::disk() const {
  DiskPoint p;
  p.w = w;
  return p;
}

TangentVector::TangentVector(const CMatrix& dom, const CMatrix& dz) : d_omega(symmetrize(dom)), d_z(dz) {
  require_square(dom, "TangentVector");
  if (dz.size() != 0 && dz.cols() != dom.rows())
    throw DimensionError("TangentVector: dZ must be m x n");
}

TangentVector::TangentVector(const CMatrix& dom) : TangentVector(dom, CMatrix(0, dom.cols())) {}

bool validate(const SiegelPoint& p, Tolerance tol) {
  require_square(p.omega, "validate");
  return is_symmetric(p.omega, tol) && im_positive(p.omega, tol);
}

bool validate(const JacobiPoint& p, Tolerance tol) {
  require_square(p.omega, "validate");
  if (p.z.cols() != p.omega.rows()) throw DimensionError("validate: z must be m x n");
  return is_symmetric(p.omega, tol) && im_positive(p.omega, tol) && p.z.allFinite();
}

bool validate(const DiskPoint& p, Tolerance tol) {
  require_square(p.w, "validate");
  return is_symmetric(p.w, tol) && disk_positive(p.w, tol);
}

bool validate(const JacobiDiskPoint& p, Tolerance tol) {
  require_square(p.w, "validate");
  if (p.eta.cols() != p.w.rows()) throw DimensionError("validate: eta must be m x n");
  return is_symmetric(p.w, tol) && disk_positive(p.w, tol) && p.eta.allFinite();
}

json to_json(const SiegelPoint& p) { return {{"omega", matrix_to_json(p.omega)}}; }

json to_json(const JacobiPoint& p) {
  return {{"omega", matrix_to_json(p.omega)}, {"z", matrix_to_json(p.z)}};
}

json to_json(const DiskPoint& p) { return {{"w", matrix_to_json(p.w)}}; }

json to_json(const JacobiDiskPoint& p) {
  return {{"w", matrix_to_json(p.w)}, {"eta", matrix_to_json(p.eta)}};
}

json to_json(const TangentVector& t) {
  json j = {{"dOmega", matrix_to_json(t.d_omega)}};
  if (t.d_z.size() != 0) j["dZ"] = matrix_to_json(t.d_z);
  return j;
}

namespace {
const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParameterError(std::string("point JSON is missing '") + key + "'");
  return j.at(key);
}
}  // namespace

SiegelPoint siegel_from_json(const json& j) { return SiegelPoint(matrix_from_json(field(j, "omega"))); }

JacobiPoint jacobi_from_json(const json& j) {
  return JacobiPoint(matrix_from_json(field(j, "omega")), matrix_from_json(field(j, "z")));
}

DiskPoint disk_from_json(const json& j) { return DiskPoint(matrix_from_json(field(j, "w"))); }

JacobiDiskPoint jacobi_disk_from_json(const json& j) {
  return JacobiDiskPoint(matrix_from_json(field(j, "w")), matrix_from_json(field(j, "eta")));
}

TangentVector tangent_from_json(const json& j) {
  CMatrix dom = matrix_from_json(field(j, "dOmega"));
  if (j.contains("dZ")) return TangentVector(dom, matrix_from_json(j.at("dZ")));
  return TangentVector(dom);
}

}  // namespace sj
