#pragma once

#include <map>
#include <string>
#include <vector>

#include "sj/diffops.hpp"
#include "sj/groups.hpp"

namespace sj {

// Index M (half-integral, positive semidefinite m x m) and scalar weight det^k.
struct JacobiFormIndex {
  RMatrix m_mat;
  int k = 0;

  JacobiFormIndex() = default;
  JacobiFormIndex(const RMatrix& m_mat, int k);

  int m() const { return static_cast<int>(m_mat.rows()); }
};

// 2A integral with even diagonal.
bool is_half_integral(const RMatrix& a, double tol = 1e-9);

struct FourierTerm {
  RMatrix t;  // n x n, symmetric half-integral, >= 0
  RMatrix r;  // n x m, integral
  cplx c;
};

// Finite sum of c(T,R) e((1/lambda) sigma(T Omega)) e(sigma(R Z)). Terms with the
// same (T, R) are merged; zero coefficients are dropped.
class FourierSeries {
 public:
  FourierSeries(int lambda_gamma, const JacobiFormIndex& index, int n, const std::vector<FourierTerm>& terms);

  int lambda_gamma() const { return lambda_; }
  const JacobiFormIndex& index() const { return index_; }
  int n() const { return n_; }
  int m() const { return index_.m(); }
  const std::vector<FourierTerm>& terms() const { return terms_; }

 private:
  int lambda_;
  JacobiFormIndex index_;
  int n_;
  std::vector<FourierTerm> terms_;
};

// Sum over l in Z^{(m,n)}, ||l||_inf <= radius, of e(sigma(M (l Omega tl + 2 l tZ))).
// Invariant under every integral Heisenberg translation and singular.
FourierSeries jacobi_theta_series(const JacobiFormIndex& index, int n, int radius);

cplx automorphic_factor(const JacobiFormIndex& idx, const JacobiGroupElement& g, const JacobiPoint& p);

// (f|[g])(Omega, Z) = J(g, (Omega, Z))^-1 f(g . (Omega, Z))
JacobiField slash(const JacobiField& f, const JacobiFormIndex& idx, const JacobiGroupElement& g);

cplx fourier_eval(const FourierSeries& s, const JacobiPoint& p);

// det [[T/lambda, R/2], [tR/2, M]] for one term.
double singular_block_det(const FourierSeries& s, const FourierTerm& term);
bool is_singular(const FourierSeries& s, double tol = 1e-9);

// det(Y) det(d/dY + (1/8 pi) t(d/dV) M^-1 d/dV) applied termwise in closed form.
cplx apply_m_operator(const FourierSeries& s, const JacobiPoint& p);
// The same operator applied to fourier_eval by finite differences in (Y, V).
cplx apply_m_operator_fd(const FourierSeries& s, const JacobiPoint& p, const FDConfig& cfg = {5e-3});

// Fourier side of lim_{t -> inf} f(diag(Omega, i t I_{n-r}), (Z, 0)).
FourierSeries siegel_jacobi_operator(const FourierSeries& s, int r, std::vector<std::string>* warnings = nullptr);

// Polynomial in the m x n variables z_pi; variable index p * n + i.
class Polynomial {
 public:
  using Exponent = std::vector<int>;

  Polynomial(int m, int n) : m_(m), n_(n) {}
  static Polynomial constant(int m, int n, cplx c);
  static Polynomial variable(int m, int n, int p, int i);

  int m() const { return m_; }
  int n() const { return n_; }
  int vars() const { return m_ * n_; }
  const std::map<Exponent, cplx>& terms() const { return terms_; }
  void add_term(const Exponent& e, cplx c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(cplx s) const;

  Polynomial derivative(int var) const;
  cplx evaluate(const CMatrix& z) const;
  double max_coefficient() const;
  // P(tB Z A)
  Polynomial transform(const CMatrix& a, const CMatrix& b) const;
  // Replace variable v by images[v] (all over the same m x n variables).
  Polynomial substitute(const std::vector<Polynomial>& images) const;
  int degree() const;

 private:
  int m_, n_;
  std::map<Exponent, cplx> terms_;
};

// Delta_ij P = sum_pq t_pq d^2 P / dz_pi dz_qj with T = S^-1.
Polynomial pluriharmonic_delta(const Polynomial& p, const CMatrix& s, int i, int j);
bool is_pluriharmonic(const Polynomial& p, const CMatrix& s, double tol = 1e-12);

json to_json(const FourierSeries& s);
FourierSeries series_from_json(const json& j);

}  // namespace sj
