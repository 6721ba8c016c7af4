#include "sj/jacobiforms.hpp"

#include <algorithm>
#include <cmath>

namespace sj {

namespace {

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

bool is_psd(const RMatrix& a, double tol) {
  if (a.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(a);
  return es.eigenvalues().minCoeff() >= -tol;
}

// sigma(T Omega) for symmetric T and Omega.
cplx trace_sym(const RMatrix& t, const CMatrix& omega) { return (t.cast<cplx>().cwiseProduct(omega)).sum(); }

// sigma(R Z) for R n x m, Z m x n.
cplx trace_rz(const RMatrix& r, const CMatrix& z) { return (r.cast<cplx>().cwiseProduct(z.transpose())).sum(); }

cplx term_value(const FourierSeries& s, const FourierTerm& t, const JacobiPoint& p) {
  const cplx e = 2.0 * kPi * kI * (trace_sym(t.t, p.omega) / static_cast<double>(s.lambda_gamma()) + trace_rz(t.r, p.z));
  return t.c * std::exp(e);
}

std::vector<long long> term_key(const RMatrix& t, const RMatrix& r) {
  std::vector<long long> k;
  k.reserve(t.size() + r.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) k.push_back(std::llround(2.0 * t.data()[i]));
  for (Eigen::Index i = 0; i < r.size(); ++i) k.push_back(std::llround(r.data()[i]));
  return k;
}

RMatrix gate_matrix(const RMatrix& t, double lambda, const RMatrix& r, const RMatrix& m) {
  const int n = static_cast<int>(t.rows()), mm = static_cast<int>(m.rows());
  RMatrix g(n + mm, n + mm);
  g.topLeftCorner(n, n) = t / lambda;
  g.topRightCorner(n, mm) = 0.5 * r;
  g.bottomLeftCorner(mm, n) = 0.5 * r.transpose();
  g.bottomRightCorner(mm, mm) = m;
  return g;
}

}  // namespace

bool is_half_integral(const RMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
      if (!near_integer(2.0 * a(i, j), tol)) return false;
      if (i == j && !near_integer(a(i, i), tol)) return false;
    }
  return true;
}

JacobiFormIndex::JacobiFormIndex(const RMatrix& m, int k_) : m_mat(m), k(k_) {
  if (m.rows() != m.cols() || m.rows() < 1) throw DimensionError("JacobiFormIndex: M must be square");
  if (!is_half_integral(m)) throw ParameterError("JacobiFormIndex: M must be half-integral");
  if (!is_psd(m, 1e-9)) throw ParameterError("JacobiFormIndex: M must be positive semidefinite");
}

FourierSeries::FourierSeries(int lambda_gamma, const JacobiFormIndex& index, int n,
                             const std::vector<FourierTerm>& terms)
    : lambda_(lambda_gamma), index_(index), n_(n) {
  if (lambda_gamma == 0) throw ParameterError("FourierSeries: lambda must be nonzero");
  if (n < 1) throw DimensionError("FourierSeries: n must be positive");
  const int m = index.m();
  std::map<std::vector<long long>, FourierTerm> merged;
  for (const auto& term : terms) {
    if (term.t.rows() != n || term.t.cols() != n) throw DimensionError("FourierSeries: T must be n x n");
    if (term.r.rows() != n || term.r.cols() != m) throw DimensionError("FourierSeries: R must be n x m");
    if (!is_half_integral(term.t)) throw ParameterError("FourierSeries: T must be half-integral");
    if (!is_psd(term.t, 1e-9)) throw ParameterError("FourierSeries: T must be positive semidefinite");
    for (Eigen::Index i = 0; i < term.r.size(); ++i)
      if (!near_integer(term.r.data()[i], 1e-9)) throw ParameterError("FourierSeries: R must be integral");
    if (!is_psd(gate_matrix(term.t, lambda_gamma, term.r, index.m_mat), 1e-9))
      throw ParameterError("FourierSeries: [[T/lambda, R/2],[tR/2, M]] must be positive semidefinite");
    FourierTerm clean{(2.0 * term.t).array().round().matrix() / 2.0, term.r.array().round().matrix(), term.c};
    auto key = term_key(clean.t, clean.r);
    auto it = merged.find(key);
    if (it == merged.end())
      merged.emplace(key, clean);
    else
      it->second.c += term.c;
  }
  for (auto& [key, term] : merged)
    if (term.c != cplx(0.0)) terms_.push_back(term);
}

FourierSeries jacobi_theta_series(const JacobiFormIndex& index, int n, int radius) {
  const int m = index.m();
  if (radius < 0) throw ParameterError("jacobi_theta_series: radius must be >= 0");
  const int count = m * n;
  const int side = 2 * radius + 1;
  std::vector<FourierTerm> terms;
  long long total = 1;
  for (int i = 0; i < count; ++i) total *= side;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    RMatrix l(m, n);
    for (int i = 0; i < count; ++i) {
      l.data()[i] = static_cast<double>(c % side - radius);
      c /= side;
    }
    RMatrix t = l.transpose() * index.m_mat * l;
    RMatrix r = 2.0 * l.transpose() * index.m_mat;
    terms.push_back({t, r, 1.0});
  }
  return FourierSeries(1, index, n, terms);
}

cplx automorphic_factor(const JacobiFormIndex& idx, const JacobiGroupElement& g, const JacobiPoint& p) {
  if (g.n() != p.n() || g.m() != p.m() || idx.m() != p.m())
    throw DimensionError("automorphic_factor: degree mismatch");
  const CMatrix mm = idx.m_mat.cast<cplx>();
  const CMatrix c = g.sp.c();
  const CMatrix den = c * p.omega + g.sp.d();
  const CMatrix den_inv = inverse(den);
  const CMatrix w = p.z + g.h.lambda * p.omega + g.h.mu;
  const CMatrix& lam = g.h.lambda;
  const cplx e1 = (mm * w * den_inv * c * w.transpose()).trace();
  const cplx e2 =
      (mm * (lam * p.omega * lam.transpose() + 2.0 * lam * p.z.transpose() + g.h.kappa + g.h.mu * lam.transpose()))
          .trace();
  return std::exp(2.0 * kPi * kI * (e1 - e2)) * std::pow(den.determinant(), idx.k);
}

JacobiField slash(const JacobiField& f, const JacobiFormIndex& idx, const JacobiGroupElement& g) {
  return [f, idx, g](const JacobiPoint& p) { return f(act_jacobi(g, p)) / automorphic_factor(idx, g, p); };
}

cplx fourier_eval(const FourierSeries& s, const JacobiPoint& p) {
  if (p.n() != s.n() || p.m() != s.m()) throw DimensionError("fourier_eval: degree mismatch");
  cplx total = 0.0;
  for (const auto& t : s.terms()) total += term_value(s, t, p);
  return total;
}

double singular_block_det(const FourierSeries& s, const FourierTerm& term) {
  return gate_matrix(term.t, s.lambda_gamma(), term.r, s.index().m_mat).determinant();
}

bool is_singular(const FourierSeries& s, double tol) {
  for (const auto& t : s.terms())
    if (std::abs(singular_block_det(s, t)) > tol) return false;
  return true;
}

namespace {

RMatrix index_inverse(const FourierSeries& s) {
  const RMatrix& m = s.index().m_mat;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(m);
  if (es.eigenvalues().minCoeff() <= 1e-12) throw DomainError("M operator: index M must be positive definite");
  return m.inverse();
}

}  // namespace

cplx apply_m_operator(const FourierSeries& s, const JacobiPoint& p) {
  if (p.n() != s.n() || p.m() != s.m()) throw DimensionError("apply_m_operator: degree mismatch");
  const RMatrix minv = index_inverse(s);
  const int n = s.n();
  const double det_y = p.omega.imag().determinant();
  cplx total = 0.0;
  for (const auto& t : s.terms()) {
    RMatrix inner = t.t / static_cast<double>(s.lambda_gamma()) - 0.25 * t.r * minv * t.r.transpose();
    total += std::pow(-2.0 * kPi, n) * inner.determinant() * term_value(s, t, p);
  }
  return det_y * total;
}

cplx apply_m_operator_fd(const FourierSeries& s, const JacobiPoint& p, const FDConfig& cfg) {
  if (p.n() != s.n() || p.m() != s.m()) throw DimensionError("apply_m_operator_fd: degree mismatch");
  const RMatrix minv = index_inverse(s);
  const int n = s.n(), m = s.m();
  const int nsym = n * (n + 1) / 2;
  auto y_index = [n](int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  };
  auto v_index = [nsym, n](int k, int l) { return nsym + k * n + l; };

  const RMatrix x = p.omega.real(), u = p.z.real();
  RVector base(nsym + m * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) base(y_index(i, j)) = p.omega(i, j).imag();
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < n; ++l) base(v_index(k, l)) = p.z(k, l).imag();

  auto field = [&](const RVector& r) {
    CMatrix omega(n, n), z(m, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) omega(i, j) = cplx(x(i, j), r(y_index(i, j)));
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < n; ++l) z(k, l) = cplx(u(k, l), r(v_index(k, l)));
    JacobiPoint q;
    q.omega = omega;
    q.z = z;
    return fourier_eval(s, q);
  };
  FDStencil st(field, base, cfg);

  // Entry (a, b) of the operator matrix as a list of (coefficient, derivative indices).
  using Monomial = std::pair<double, std::vector<int>>;
  auto entry = [&](int a, int b) {
    std::vector<Monomial> ops;
    ops.push_back({a == b ? 1.0 : 0.5, {y_index(a, b)}});
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l)
        if (minv(k, l) != 0.0) ops.push_back({minv(k, l) / (8.0 * kPi), {v_index(k, a), v_index(l, b)}});
    return ops;
  };

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  cplx total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    std::vector<Monomial> prod{{inversions % 2 ? -1.0 : 1.0, {}}};
    for (int a = 0; a < n; ++a) {
      std::vector<Monomial> next;
      for (const auto& lhs : prod)
        for (const auto& rhs : entry(a, perm[a])) {
          std::vector<int> idx = lhs.second;
          idx.insert(idx.end(), rhs.second.begin(), rhs.second.end());
          next.push_back({lhs.first * rhs.first, idx});
        }
      prod = std::move(next);
    }
    for (const auto& [coef, idx] : prod) total += coef * st.partial(idx);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return p.omega.imag().determinant() * total;
}

FourierSeries siegel_jacobi_operator(const FourierSeries& s, int r, std::vector<std::string>* warnings) {
  const int n = s.n();
  if (r < 1 || r >= n) throw ParameterError("siegel_jacobi_operator: need 1 <= r < n");
  const int q = n - r;
  std::vector<FourierTerm> kept;
  for (const auto& t : s.terms()) {
    if (t.t.bottomRightCorner(q, q).cwiseAbs().maxCoeff() > 0.0) continue;
    const bool offdiag = t.t.topRightCorner(r, q).cwiseAbs().maxCoeff() > 0.0;
    const bool rrows = t.r.bottomRows(q).size() > 0 && t.r.bottomRows(q).cwiseAbs().maxCoeff() > 0.0;
    if (offdiag || rrows) {
      if (warnings) warnings->push_back("dropped a term whose T has a zero block but nonzero coupling");
      continue;
    }
    kept.push_back({t.t.topLeftCorner(r, r), t.r.topRows(r), t.c});
  }
  return FourierSeries(s.lambda_gamma(), s.index(), r, kept);
}

Polynomial Polynomial::constant(int m, int n, cplx c) {
  Polynomial p(m, n);
  p.add_term(Exponent(m * n, 0), c);
  return p;
}

Polynomial Polynomial::variable(int m, int n, int pp, int i) {
  if (pp < 0 || pp >= m || i < 0 || i >= n) throw DimensionError("Polynomial::variable: index out of range");
  Polynomial p(m, n);
  Exponent e(m * n, 0);
  e[pp * n + i] = 1;
  p.add_term(e, 1.0);
  return p;
}

void Polynomial::add_term(const Exponent& e, cplx c) {
  if (static_cast<int>(e.size()) != vars()) throw DimensionError("Polynomial: exponent size mismatch");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (c != cplx(0.0)) terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == cplx(0.0)) terms_.erase(it);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.m_ != m_ || o.n_ != n_) throw DimensionError("Polynomial: shape mismatch");
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * cplx(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.m_ != m_ || o.n_ != n_) throw DimensionError("Polynomial: shape mismatch");
  Polynomial r(m_, n_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponent e(e1.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

Polynomial Polynomial::operator*(cplx s) const {
  Polynomial r(m_, n_);
  for (const auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= vars()) throw DimensionError("Polynomial::derivative: index out of range");
  Polynomial r(m_, n_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    r.add_term(d, c * static_cast<double>(e[var]));
  }
  return r;
}

cplx Polynomial::evaluate(const CMatrix& z) const {
  require_shape(z, m_, n_, "Polynomial::evaluate");
  cplx total = 0.0;
  for (const auto& [e, c] : terms_) {
    cplx v = c;
    for (int a = 0; a < vars(); ++a)
      if (e[a]) v *= std::pow(z(a / n_, a % n_), e[a]);
    total += v;
  }
  return total;
}

double Polynomial::max_coefficient() const {
  double r = 0.0;
  for (const auto& [e, c] : terms_) r = std::max(r, std::abs(c));
  return r;
}

Polynomial Polynomial::transform(const CMatrix& a, const CMatrix& b) const {
  require_shape(a, n_, n_, "Polynomial::transform A");
  require_shape(b, m_, m_, "Polynomial::transform B");
  // (tB Z A)_pi = sum_qj B_qp z_qj A_ji
  std::vector<Polynomial> lin;
  for (int p = 0; p < m_; ++p)
    for (int i = 0; i < n_; ++i) {
      Polynomial l(m_, n_);
      for (int q = 0; q < m_; ++q)
        for (int j = 0; j < n_; ++j) l = l + variable(m_, n_, q, j) * (b(q, p) * a(j, i));
      lin.push_back(l);
    }
  return substitute(lin);
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images) const {
  if (static_cast<int>(images.size()) != vars()) throw DimensionError("Polynomial::substitute: need one image per variable");
  Polynomial r(m_, n_);
  for (const auto& [e, c] : terms_) {
    Polynomial mono = constant(m_, n_, c);
    for (int v = 0; v < vars(); ++v)
      for (int k = 0; k < e[v]; ++k) mono = mono * images[v];
    r = r + mono;
  }
  return r;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

Polynomial pluriharmonic_delta(const Polynomial& p, const CMatrix& s, int i, int j) {
  const int m = p.m(), n = p.n();
  require_shape(s, m, m, "pluriharmonic_delta");
  if (i < 0 || i >= n || j < 0 || j >= n) throw DimensionError("pluriharmonic_delta: index out of range");
  const CMatrix t = inverse(s);
  Polynomial r(m, n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (t(a, b) != cplx(0.0)) r = r + p.derivative(a * n + i).derivative(b * n + j) * t(a, b);
  return r;
}

bool is_pluriharmonic(const Polynomial& p, const CMatrix& s, double tol) {
  if (!is_positive_definite(s)) throw DomainError("is_pluriharmonic: S must be positive definite");
  const double scale = std::max(1.0, p.max_coefficient() * max_abs(inverse(s)));
  for (int i = 0; i < p.n(); ++i)
    for (int j = 0; j < p.n(); ++j)
      if (pluriharmonic_delta(p, s, i, j).max_coefficient() > tol * scale) return false;
  return true;
}

json to_json(const FourierSeries& s) {
  json terms = json::array();
  for (const auto& t : s.terms())
    terms.push_back({{"T", matrix_to_json(t.t.cast<cplx>())},
                     {"R", matrix_to_json(t.r.cast<cplx>())},
                     {"c", {t.c.real(), t.c.imag()}}});
  return {{"lambda", s.lambda_gamma()},
          {"M", matrix_to_json(s.index().m_mat.cast<cplx>())},
          {"k", s.index().k},
          {"n", s.n()},
          {"terms", terms}};
}

FourierSeries series_from_json(const json& j) {
  if (!j.is_object() || !j.contains("M")) throw ParameterError("series JSON: expected an object with \"M\"");
  const CMatrix mc = matrix_from_json(j.at("M"));
  if (!is_real(mc)) throw ParameterError("series JSON: M must be real");
  JacobiFormIndex idx(mc.real(), j.value("k", 0));
  std::vector<FourierTerm> terms;
  int n = j.value("n", 0);
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      CMatrix tc = matrix_from_json(t.at("T")), rc = matrix_from_json(t.at("R"));
      if (!is_real(tc) || !is_real(rc)) throw ParameterError("series JSON: T and R must be real");
      const auto& c = t.at("c");
      cplx coef = c.is_array() ? cplx(c.at(0).get<double>(), c.at(1).get<double>()) : cplx(c.get<double>(), 0.0);
      terms.push_back({tc.real(), rc.real(), coef});
      if (n == 0) n = static_cast<int>(tc.rows());
    }
  }
  if (n == 0) throw ParameterError("series JSON: cannot infer n from an empty series without \"n\"");
  return FourierSeries(j.value("lambda", 1), idx, n, terms);
}

}  // namespace sj
