#include "sj/diffops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace sj {

namespace {

using Pair = std::pair<CMatrix, CMatrix>;
using PairField = std::function<cplx(const Pair&)>;

// Real coordinates (Re, Im) of every complex variable: symmetric upper
// triangle first, then the rectangular block.
struct Layout {
  int n, m;
  std::vector<std::pair<int, int>> sym_idx;
  std::vector<std::pair<int, int>> rect_idx;

  Layout(int n_, int m_) : n(n_), m(m_) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) sym_idx.emplace_back(i, j);
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < n; ++l) rect_idx.emplace_back(k, l);
  }
  int vars() const { return static_cast<int>(sym_idx.size() + rect_idx.size()); }

  RVector to_real(const Pair& p) const {
    RVector r(2 * vars());
    int a = 0;
    for (auto [i, j] : sym_idx) {
      r(2 * a) = p.first(i, j).real();
      r(2 * a + 1) = p.first(i, j).imag();
      ++a;
    }
    for (auto [k, l] : rect_idx) {
      r(2 * a) = p.second(k, l).real();
      r(2 * a + 1) = p.second(k, l).imag();
      ++a;
    }
    return r;
  }

  Pair from_real(const RVector& r) const {
    Pair p{CMatrix(n, n), CMatrix(m, n)};
    int a = 0;
    for (auto [i, j] : sym_idx) {
      p.first(i, j) = p.first(j, i) = cplx(r(2 * a), r(2 * a + 1));
      ++a;
    }
    for (auto [k, l] : rect_idx) {
      p.second(k, l) = cplx(r(2 * a), r(2 * a + 1));
      ++a;
    }
    return p;
  }
};

// Wirtinger operators on top of the real-coordinate stencil.
class FDEngine {
 public:
  FDEngine(const PairField& f, const Layout& lay, const Pair& base, const FDConfig& cfg)
      : stencil_([f, &lay](const RVector& r) { return f(lay.from_real(r)); }, lay.to_real(base), cfg) {}

  // Product of Wirtinger operators: (var a, conjugate?) pairs.
  cplx wirtinger(const std::vector<std::pair<int, bool>>& ops) {
    const int k = static_cast<int>(ops.size());
    cplx total = 0.0;
    std::vector<int> idx(k);
    for (int mask = 0; mask < (1 << k); ++mask) {
      cplx coef = 1.0;
      for (int t = 0; t < k; ++t) {
        bool imag_dir = (mask >> t) & 1;
        idx[t] = 2 * ops[t].first + (imag_dir ? 1 : 0);
        // d/dc = (d/dx - i d/dy)/2, d/dcbar = (d/dx + i d/dy)/2
        coef *= imag_dir ? cplx(0, ops[t].second ? 0.5 : -0.5) : cplx(0.5, 0);
      }
      total += coef * stencil_.partial(idx);
    }
    return total;
  }

 private:
  FDStencil stencil_;
};

}  // namespace

FDStencil::FDStencil(RealField f, const RVector& base, const FDConfig& cfg)
    : f_(std::move(f)), base_(base), scheme_(cfg.scheme) {
  if (!(cfg.step > 0)) throw ParameterError("FDConfig: step must be positive");
  h_.resize(base_.size());
  for (Eigen::Index k = 0; k < base_.size(); ++k) h_(k) = cfg.step * std::max(1.0, std::abs(base_(k)));
}

cplx FDStencil::partial(std::vector<int> idx) {
  for (int i : idx)
    if (i < 0 || i >= base_.size()) throw DimensionError("FDStencil: coordinate index out of range");
  std::sort(idx.begin(), idx.end());
  cplx p1 = nested(idx, 1);
  if (scheme_ == FDConfig::Scheme::central2) return p1;
  cplx p2 = nested(idx, 2);
  return (4.0 * p1 - p2) / 3.0;
}

cplx FDStencil::nested(const std::vector<int>& idx, int scale) {
  const int k = static_cast<int>(idx.size());
  cplx acc = 0.0;
  double denom = 1.0;
  for (int t = 0; t < k; ++t) denom *= 2.0 * scale * h_(idx[t]);
  std::vector<int> off(base_.size(), 0);
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::fill(off.begin(), off.end(), 0);
    int sign = 1;
    for (int t = 0; t < k; ++t) {
      bool neg = (mask >> t) & 1;
      off[idx[t]] += neg ? -scale : scale;
      if (neg) sign = -sign;
    }
    acc += static_cast<double>(sign) * eval(off);
  }
  return acc / denom;
}

cplx FDStencil::eval(const std::vector<int>& off) {
  auto it = memo_.find(off);
  if (it != memo_.end()) return it->second;
  RVector r = base_;
  for (Eigen::Index k = 0; k < r.size(); ++k) r(k) += off[k] * h_(k);
  cplx v = f_(r);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw EvaluationError("field returned a non-finite value at a stencil point");
  memo_.emplace(off, v);
  return v;
}

namespace {

WirtingerTable build_table(const PairField& f, int n, int m, const Pair& base, const FDConfig& cfg) {
  Layout lay(n, m);
  FDEngine eng(f, lay, base, cfg);
  WirtingerTable t;
  t.n = n;
  t.m = m;
  const int N = lay.vars();
  t.d.resize(N);
  t.dbar.resize(N);
  t.mixed.resize(N, N);
  t.holo.resize(N, N);
  t.antiholo.resize(N, N);
  for (int a = 0; a < N; ++a) {
    t.d(a) = eng.wirtinger({{a, false}});
    t.dbar(a) = eng.wirtinger({{a, true}});
  }
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      t.mixed(a, b) = eng.wirtinger({{a, false}, {b, true}});
      if (b >= a) {
        t.holo(a, b) = t.holo(b, a) = eng.wirtinger({{a, false}, {b, false}});
        t.antiholo(a, b) = t.antiholo(b, a) = eng.wirtinger({{a, true}, {b, true}});
      }
    }
  return t;
}

double weight(int i, int j) { return i == j ? 1.0 : 0.5; }

}  // namespace

int WirtingerTable::sym(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major upper triangle
  return i * n - i * (i - 1) / 2 + (j - i);
}

int WirtingerTable::rect(int k, int l) const { return n * (n + 1) / 2 + k * n + l; }

CMatrix WirtingerTable::d_sym() const {
  CMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = weight(i, j) * d(sym(i, j));
  return r;
}

CMatrix WirtingerTable::dbar_sym() const {
  CMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = weight(i, j) * dbar(sym(i, j));
  return r;
}

CMatrix WirtingerTable::d_rect() const {
  CMatrix r(n, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < n; ++l) r(l, k) = d(rect(k, l));
  return r;
}

CMatrix WirtingerTable::dbar_rect() const {
  CMatrix r(n, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < n; ++l) r(l, k) = dbar(rect(k, l));
  return r;
}

WirtingerTable wirtinger_derivs(const SiegelField& f, const SiegelPoint& p, const FDConfig& cfg) {
  auto g = [&](const Pair& x) {
    SiegelPoint q;
    q.omega = x.first;
    return f(q);
  };
  return build_table(g, p.n(), 0, {p.omega, CMatrix(0, p.n())}, cfg);
}

WirtingerTable wirtinger_derivs(const JacobiField& f, const JacobiPoint& p, const FDConfig& cfg) {
  auto g = [&](const Pair& x) {
    JacobiPoint q;
    q.omega = x.first;
    q.z = x.second;
    return f(q);
  };
  return build_table(g, p.n(), p.m(), {p.omega, p.z}, cfg);
}

WirtingerTable wirtinger_derivs(const DiskField& f, const JacobiDiskPoint& p, const FDConfig& cfg) {
  auto g = [&](const Pair& x) {
    JacobiDiskPoint q;
    q.w = x.first;
    q.eta = x.second;
    return f(q);
  };
  return build_table(g, p.n(), p.m(), {p.w, p.eta}, cfg);
}

namespace {

// sigma(Y t(Y dbar_S) d_S) = sum Y_ab Y_cd w_db w_ca d^2/ds_ca dsbar_db
cplx maass_term(const WirtingerTable& t, const CMatrix& y1, const CMatrix& y2) {
  const int n = t.n;
  cplx acc = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          acc += y1(a, b) * y2(c, d) * weight(d, b) * weight(c, a) * t.mixed(t.sym(c, a), t.sym(d, b));
  return acc;
}

// Z-Zbar block of the horizontal part of the inverse metric:
// 1/2 sum (K_kl X_ij + Q_kj conj(Q_li)) d^2/dr_ki drbar_lj.
// At n = 1 this is sum K_kl X d^2/dr_k drbar_l; for n >= 2 the second
// half is needed for invariance.
cplx horizontal_zz(const WirtingerTable& t, const CMatrix& kk, const CMatrix& x, const CMatrix& q) {
  const int n = t.n, m = t.m;
  cplx acc = 0.0;
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          acc += 0.5 * (kk(k, l) * x(i, j) + q(k, j) * std::conj(q(l, i))) * t.mixed(t.rect(k, i), t.rect(l, j));
  return acc;
}

}  // namespace

cplx laplacian_siegel(const SiegelField& f, const SiegelPoint& p, double A, const FDConfig& cfg) {
  if (!(A > 0)) throw ParameterError("laplacian_siegel: A must be positive");
  WirtingerTable t = wirtinger_derivs(f, p, cfg);
  CMatrix y = p.omega.imag().cast<cplx>();
  return 4.0 / A * maass_term(t, y, y);
}

cplx m1(const WirtingerTable& t, const JacobiPoint& p) {
  const int n = t.n, m = t.m;
  CMatrix y = p.omega.imag().cast<cplx>();
  CMatrix v = p.z.imag().cast<cplx>();
  CMatrix k = v * inverse(y) * v.transpose();
  cplx acc = maass_term(t, y, y);
  acc += horizontal_zz(t, k, y, v);
  // sigma(V t(Y dbar_Omega) d_Z) and sigma(tV t(Y dbar_Z) d_Omega)
  for (int q = 0; q < m; ++q)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          acc += v(q, a) * y(b, c) * weight(c, a) * t.mixed(t.rect(q, b), t.sym(c, a));
          acc += v(q, a) * y(b, c) * weight(b, a) * t.mixed(t.sym(b, a), t.rect(q, c));
        }
  return acc;
}

cplx m2(const WirtingerTable& t, const JacobiPoint& p) {
  const int n = t.n, m = t.m;
  CMatrix y = p.omega.imag().cast<cplx>();
  cplx acc = 0.0;
  for (int q = 0; q < m; ++q)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) acc += y(a, b) * t.mixed(t.rect(q, b), t.rect(q, a));
  return acc;
}

cplx m1(const JacobiField& f, const JacobiPoint& p, const FDConfig& cfg) {
  return m1(wirtinger_derivs(f, p, cfg), p);
}

cplx m2(const JacobiField& f, const JacobiPoint& p, const FDConfig& cfg) {
  return m2(wirtinger_derivs(f, p, cfg), p);
}

cplx laplacian_jacobi(const JacobiField& f, const JacobiPoint& p, const MetricParams& prm, const FDConfig& cfg) {
  WirtingerTable t = wirtinger_derivs(f, p, cfg);
  return 4.0 / prm.A * m1(t, p) + 4.0 / prm.B * m2(t, p);
}

namespace {

cplx s1_value(const WirtingerTable& t, const CMatrix& r) {
  cplx acc = 0.0;
  for (int a = 0; a < t.n; ++a)
    for (int b = 0; b < t.n; ++b)
      for (int k = 0; k < t.m; ++k) acc += r(a, b) * t.mixed(t.rect(k, b), t.rect(k, a));
  return acc;
}

cplx s2_value(const WirtingerTable& t, const JacobiDiskPoint& p) {
  const int n = t.n, m = t.m;
  const CMatrix I = identity(n);
  const CMatrix& w = p.w;
  const CMatrix wb = w.conjugate();
  const CMatrix& e = p.eta;
  const CMatrix eb = e.conjugate();
  CMatrix l = I - w * wb;
  CMatrix r = I - wb * w;
  cplx acc = maass_term(t, l, l);
  // sigma(t(eta - etabar W) t(d_etabar) (I - Wbar W) d_W)
  CMatrix pm = (e - eb * w).transpose();  // n x m
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < m; ++k)
      for (int ll = 0; ll < n; ++ll)
        for (int c = 0; c < n; ++c)
          acc += pm(a, k) * r(ll, c) * weight(c, a) * t.mixed(t.sym(c, a), t.rect(k, ll));
  // sigma((etabar - eta Wbar) t((I - W Wbar) d_Wbar) d_eta)
  CMatrix q = eb - e * wb;  // m x n
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          acc += q(k, a) * l(b, c) * weight(c, a) * t.mixed(t.rect(k, b), t.sym(c, a));
  // -eta Wbar L^-1 t(eta) - etabar W R^-1 t(etabar) + etabar L^-1 t(eta) + eta Wbar W R^-1 t(etabar)
  // collapses to Q L^-1 Q^H
  CMatrix kk = q * inverse(l) * q.adjoint();
  acc += horizontal_zz(t, kk, l, q);
  return acc;
}

cplx j_value(const WirtingerTable& t, const CMatrix& r, int k, int l) {
  cplx acc = 0.0;
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) acc += r(i, j) * t.mixed(t.rect(l, j), t.rect(k, i));
  return acc;
}

// det(I - Wbar W) det(d_eta t(d_etabar)), expanded over permutations.
cplx s3_value(const DiskField& f, const JacobiDiskPoint& p, const FDConfig& cfg) {
  const int n = p.n(), m = p.m();
  Layout lay(n, m);
  auto g = [&](const Pair& x) {
    JacobiDiskPoint q;
    q.w = x.first;
    q.eta = x.second;
    return f(q);
  };
  FDConfig c = cfg;
  // order-2n differences need a larger step to stay above roundoff
  c.step = std::max(cfg.step, n >= 2 ? 1e-2 : cfg.step);
  FDEngine eng(g, lay, {p.w, p.eta}, c);
  WirtingerTable shape;
  shape.n = n;
  shape.m = m;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  cplx det_ops = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double sign = inversions % 2 ? -1.0 : 1.0;
    // choose k_a for each row a
    int combos = 1;
    for (int a = 0; a < n; ++a) combos *= m;
    for (int cidx = 0; cidx < combos; ++cidx) {
      std::vector<std::pair<int, bool>> ops;
      int rem = cidx;
      for (int a = 0; a < n; ++a) {
        int k = rem % m;
        rem /= m;
        ops.push_back({shape.rect(k, a), false});
        ops.push_back({shape.rect(k, perm[a]), true});
      }
      det_ops += sign * eng.wirtinger(ops);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  CMatrix r = identity(n) - p.w.conjugate() * p.w;
  return r.determinant() * det_ops;
}

}  // namespace

cplx disk_operator(const WirtingerTable& t, const JacobiDiskPoint& p, DiskOp op) {
  CMatrix r = identity(t.n) - p.w.conjugate() * p.w;
  switch (op.kind) {
    case DiskOp::Kind::S1:
      return s1_value(t, r);
    case DiskOp::Kind::S2:
      return s2_value(t, p);
    case DiskOp::Kind::J:
      if (op.k < 0 || op.k >= t.m || op.l < 0 || op.l >= t.m) throw ParameterError("J_kl: index out of range");
      return j_value(t, r, op.k, op.l);
    case DiskOp::Kind::S3:
      break;
  }
  throw ParameterError("S3 needs the field itself, not a second-order table");
}

cplx disk_operator(const DiskField& f, const JacobiDiskPoint& p, DiskOp op, const FDConfig& cfg) {
  if (op.kind == DiskOp::Kind::S3) return s3_value(f, p, cfg);
  return disk_operator(wirtinger_derivs(f, p, cfg), p, op);
}

cplx laplacian_disk(const DiskField& f, const JacobiDiskPoint& p, const MetricParams& prm, const FDConfig& cfg) {
  WirtingerTable t = wirtinger_derivs(f, p, cfg);
  return s2_value(t, p) / prm.A + s1_value(t, identity(t.n) - p.w.conjugate() * p.w) / prm.B;
}

cplx invariant_poly(const InvariantId& id, const CMatrix& omega, const CMatrix& z) {
  require_square(omega, "invariant_poly");
  const int n = static_cast<int>(omega.rows());
  CMatrix ww = omega * omega.conjugate();
  auto power = [&](int k) {
    CMatrix r = identity(n);
    for (int i = 0; i < k; ++i) r = r * ww;
    return r;
  };
  switch (id.kind) {
    case InvariantId::Kind::q:
    case InvariantId::Kind::phi:
      if (id.k < 1 || id.k > n) throw ParameterError("invariant_poly: index out of range 1..n");
      return power(id.k).trace();
    case InvariantId::Kind::psi: {
      if (id.k < 0 || id.k > n - 1) throw ParameterError("invariant_poly: psi index k out of range 0..n-1");
      if ((id.eps != 0 && id.eps != 1) || (id.eps2 != 0 && id.eps2 != 1))
        throw ParameterError("invariant_poly: psi epsilons must be 0 or 1");
      if (z.cols() != n) throw DimensionError("invariant_poly: z must be m x n");
      const int m = static_cast<int>(z.rows());
      if (id.a < 0 || id.a >= m || id.b < 0 || id.b >= m)
        throw ParameterError("invariant_poly: psi entry out of range");
      CMatrix left = id.eps == 0 ? CMatrix(z.conjugate()) : CMatrix(z * omega.conjugate());
      CMatrix right = id.eps2 == 0 ? CMatrix(z.transpose()) : CMatrix(omega * z.adjoint());
      return (left * power(id.k) * right)(id.b, id.a);
    }
  }
  return 0.0;
}

InvariantId parse_invariant(const std::string& name) {
  // q:j | phi:2k | psi:e:2k:e':b:a (b, a 1-based)
  std::vector<std::string> parts;
  std::string cur;
  for (char c : name) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  try {
    if (parts[0] == "q" && parts.size() == 2) return {InvariantId::Kind::q, std::stoi(parts[1])};
    if (parts[0] == "phi" && parts.size() == 2) {
      int e = std::stoi(parts[1]);
      if (e % 2) throw ParameterError("phi exponent must be even");
      return {InvariantId::Kind::phi, e / 2};
    }
    if (parts[0] == "psi" && parts.size() == 6) {
      int e = std::stoi(parts[2]);
      if (e % 2) throw ParameterError("psi exponent must be even");
      return {InvariantId::Kind::psi, e / 2, std::stoi(parts[1]), std::stoi(parts[3]), std::stoi(parts[4]) - 1,
              std::stoi(parts[5]) - 1};
    }
  } catch (const std::logic_error&) {
  }
  throw ParameterError("unknown invariant generator '" + name + "'");
}

CMatrix random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

cplx bessel_k(cplx s, double x) {
  if (!(x > 0)) throw DomainError("bessel_k: argument must be positive");
  // integrand decays like exp(-x cosh t + |Re s| t)
  const double a = std::abs(s.real());
  double t_max = 1.0;
  while (x * std::cosh(t_max) - a * t_max < 60.0 + std::log(1.0 + a)) t_max += 0.25;
  const double h = std::min(0.02, t_max / 400.0);
  const int steps = static_cast<int>(std::ceil(t_max / h));
  cplx acc = 0.5 * std::exp(-x);  // t = 0 endpoint (cosh(0) = 1)
  for (int k = 1; k <= steps; ++k) {
    double t = k * h;
    acc += std::exp(-x * std::cosh(t)) * std::cosh(s * t);
  }
  return acc * h;
}

namespace {

cplx parse_param(const std::string& s) {
  CMatrix v = matrix_from_json(json(s));
  return v(0, 0);
}

}  // namespace

BuiltinField builtin_field(const std::string& id) {
  std::string name = id, arg1, arg2;
  auto c1 = id.find(':');
  if (c1 != std::string::npos) {
    name = id.substr(0, c1);
    std::string rest = id.substr(c1 + 1);
    auto c2 = rest.find(':');
    arg1 = rest.substr(0, c2);
    if (c2 != std::string::npos) arg2 = rest.substr(c2 + 1);
  }
  auto ys = [](const JacobiPoint& p, cplx s) { return std::exp(s * std::log(p.omega(0, 0).imag())); };
  auto X = [](const JacobiPoint& p) { return p.omega(0, 0).real(); };
  auto Y = [](const JacobiPoint& p) { return p.omega(0, 0).imag(); };
  auto U = [](const JacobiPoint& p) { return p.z(0, 0).real(); };
  auto V = [](const JacobiPoint& p) { return p.z(0, 0).imag(); };
  cplx s = arg1.empty() ? cplx(0.5) : parse_param(arg1);
  const cplx b = s * (s - 1.0), c = s * (s + 1.0);
  if (name == "ys") return {id, [=](const JacobiPoint& p) { return ys(p, s); }, b};
  if (name == "ysx") return {id, [=](const JacobiPoint& p) { return ys(p, s) * X(p); }, b};
  if (name == "ysu") return {id, [=](const JacobiPoint& p) { return ys(p, s) * U(p); }, b};
  if (name == "ysv") return {id, [=](const JacobiPoint& p) { return ys(p, s) * V(p); }, c};
  if (name == "ysuv") return {id, [=](const JacobiPoint& p) { return ys(p, s) * U(p) * V(p); }, c};
  if (name == "ysxv") return {id, [=](const JacobiPoint& p) { return ys(p, s) * X(p) * V(p); }, c};
  if (name == "x") return {id, [=](const JacobiPoint& p) { return cplx(X(p)); }, 0.0};
  if (name == "y") return {id, [=](const JacobiPoint& p) { return cplx(Y(p)); }, 0.0};
  if (name == "u") return {id, [=](const JacobiPoint& p) { return cplx(U(p)); }, 0.0};
  if (name == "v") return {id, [=](const JacobiPoint& p) { return cplx(V(p)); }, 0.0};
  if (name == "xv") return {id, [=](const JacobiPoint& p) { return cplx(X(p) * V(p)); }, 0.0};
  if (name == "uv") return {id, [=](const JacobiPoint& p) { return cplx(U(p) * V(p)); }, 0.0};
  if (name == "bessel") {
    double a = arg2.empty() ? 1.0 : parse_param(arg2).real();
    if (a == 0.0) throw ParameterError("bessel field needs a != 0");
    return {id,
            [=](const JacobiPoint& p) {
              double y = Y(p);
              return std::sqrt(y) * bessel_k(s - 0.5, 2 * kPi * std::abs(a) * y) *
                     std::exp(2.0 * kPi * kI * a * X(p));
            },
            b};
  }
  throw ParameterError("unknown builtin field '" + id + "'");
}

std::vector<std::string> builtin_field_ids() {
  return {"ys:<s>", "ysx:<s>", "ysu:<s>", "ysv:<s>", "ysuv:<s>", "ysxv:<s>", "x",
          "y",      "u",       "v",       "xv",      "uv",       "bessel:<s>:<a>"};
}

}  // namespace sj
