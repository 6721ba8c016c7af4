#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sj/metrics.hpp"

namespace sj {

using SiegelField = std::function<cplx(const SiegelPoint&)>;
using JacobiField = std::function<cplx(const JacobiPoint&)>;
using DiskField = std::function<cplx(const JacobiDiskPoint&)>;

struct FDConfig {
  enum class Scheme { central2, central4 };
  double step = 1e-3;  // relative; scaled by max(1, |coordinate|)
  Scheme scheme = Scheme::central4;
};

using RealField = std::function<cplx(const RVector&)>;

// Nested central differences on real coordinates, memoizing stencil points.
// The step for coordinate k is cfg.step * max(1, |base_k|).
class FDStencil {
 public:
  FDStencil(RealField f, const RVector& base, const FDConfig& cfg = {});
  // d^k f / dx_{i1} ... dx_{ik}
  cplx partial(std::vector<int> idx);

 private:
  cplx nested(const std::vector<int>& idx, int scale);
  cplx eval(const std::vector<int>& off);

  RealField f_;
  RVector base_;
  RVector h_;
  FDConfig::Scheme scheme_;
  std::map<std::vector<int>, cplx> memo_;
};

// First and second Wirtinger derivatives in the complex coordinates
// s_ij (i <= j) of the symmetric block and r_kl of the m x n block.
// Variable order: s_ij row-major over the upper triangle, then r_kl row-major.
struct WirtingerTable {
  int n = 0;
  int m = 0;
  Eigen::VectorXcd d;      // d/dc_a
  Eigen::VectorXcd dbar;   // d/dcbar_a
  CMatrix mixed;           // d^2 / dc_a dcbar_b
  CMatrix holo;            // d^2 / dc_a dc_b
  CMatrix antiholo;        // d^2 / dcbar_a dcbar_b

  int sym(int i, int j) const;   // index of s_ij = s_ji
  int rect(int k, int l) const;  // index of r_kl
  int size() const { return n * (n + 1) / 2 + m * n; }

  // Weighted matrices (1+delta_ij)/2 d/ds_ij, and the n x m matrix whose (l,k) entry is d/dr_kl.
  CMatrix d_sym() const;
  CMatrix dbar_sym() const;
  CMatrix d_rect() const;
  CMatrix dbar_rect() const;
};

WirtingerTable wirtinger_derivs(const SiegelField& f, const SiegelPoint& p, const FDConfig& cfg = {});
WirtingerTable wirtinger_derivs(const JacobiField& f, const JacobiPoint& p, const FDConfig& cfg = {});
WirtingerTable wirtinger_derivs(const DiskField& f, const JacobiDiskPoint& p, const FDConfig& cfg = {});

// Delta_{n;A} = (4/A) sigma(Y t(Y d/dOmegabar) d/dOmega)
cplx laplacian_siegel(const SiegelField& f, const SiegelPoint& p, double A = 1.0, const FDConfig& cfg = {});

cplx m1(const WirtingerTable& t, const JacobiPoint& p);
cplx m2(const WirtingerTable& t, const JacobiPoint& p);
cplx m1(const JacobiField& f, const JacobiPoint& p, const FDConfig& cfg = {});
cplx m2(const JacobiField& f, const JacobiPoint& p, const FDConfig& cfg = {});
// (4/A) M1 + (4/B) M2
cplx laplacian_jacobi(const JacobiField& f, const JacobiPoint& p, const MetricParams& params = {},
                      const FDConfig& cfg = {});

struct DiskOp {
  enum class Kind { S1, S2, S3, J } kind;
  int k = 0;  // J only, 0-based
  int l = 0;
};

cplx disk_operator(const DiskField& f, const JacobiDiskPoint& p, DiskOp op, const FDConfig& cfg = {});
cplx disk_operator(const WirtingerTable& t, const JacobiDiskPoint& p, DiskOp op);
// (1/A) S2 + (1/B) S1
cplx laplacian_disk(const DiskField& f, const JacobiDiskPoint& p, const MetricParams& params = {},
                    const FDConfig& cfg = {});

// Generators of the U(n)-invariant polynomials on Sym_n(C) x C^{(m,n)}.
struct InvariantId {
  enum class Kind { q, phi, psi } kind;
  int k = 1;      // q_k (1..n), phi^{(2k)} (1..n), psi^{(e,2k,e')} (0..n-1)
  int eps = 0;    // psi only
  int eps2 = 0;   // psi only
  int b = 0;      // psi entry (b, a), 0-based
  int a = 0;
};
cplx invariant_poly(const InvariantId& id, const CMatrix& omega, const CMatrix& z);
InvariantId parse_invariant(const std::string& name);

// Random unitary from the QR of a complex Gaussian matrix with phase normalization.
CMatrix random_unitary(std::mt19937_64& rng, int n);

// Modified Bessel K_s(x) for x > 0 by trapezoid quadrature of
// int_0^inf exp(-x cosh t) cosh(s t) dt.
cplx bessel_k(cplx s, double x);

// Built-in test fields on H_{1,1} (the eigenfunction table) and their eigenvalues.
struct BuiltinField {
  std::string id;
  JacobiField f;
  cplx eigenvalue;
};
BuiltinField builtin_field(const std::string& id);
std::vector<std::string> builtin_field_ids();

}  // namespace sj
