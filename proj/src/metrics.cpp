#include "sj/metrics.hpp"

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace sj {

MetricParams::MetricParams(double a, double b) : A(a), B(b) {
  if (!(a > 0) || !(b > 0)) throw ParameterError("metric parameters A and B must be positive");
}

namespace {

CMatrix conj_dz(const TangentVector& t, int m, int n) {
  return t.d_z.size() == 0 ? zeros(m, n) : CMatrix(t.d_z.conjugate());
}

CMatrix dz_or_zero(const TangentVector& t, int m, int n) {
  return t.d_z.size() == 0 ? zeros(m, n) : t.d_z;
}

template <class F>
cplx hermitian(F s, const TangentVector& t1, const TangentVector& t2) {
  return 0.5 * (s(t1, t2) + std::conj(s(t2, t1)));
}

}  // namespace

cplx siegel_metric(const SiegelPoint& p, const TangentVector& t1, const TangentVector& t2, double A) {
  if (!(A > 0)) throw ParameterError("siegel_metric: A must be positive");
  CMatrix yi = inverse(CMatrix(p.omega.imag().cast<cplx>()));
  auto s = [&](const TangentVector& a, const TangentVector& b) {
    return A * (yi * a.d_omega * yi * b.d_omega.conjugate()).trace();
  };
  return hermitian(s, t1, t2);
}

cplx jacobi_metric(const JacobiPoint& p, const TangentVector& t1, const TangentVector& t2,
                   const MetricParams& prm) {
  const int n = p.n(), m = p.m();
  CMatrix yi = inverse(CMatrix(p.omega.imag().cast<cplx>()));
  CMatrix v = p.z.imag().cast<cplx>();
  CMatrix vyi = v * yi;
  CMatrix core = yi * v.transpose() * v * yi;
  auto s = [&](const TangentVector& a, const TangentVector& b) {
    CMatrix da = a.d_omega, db_bar = b.d_omega.conjugate();
    CMatrix za = dz_or_zero(a, m, n), zb_bar = conj_dz(b, m, n);
    cplx r = prm.A * (yi * da * yi * db_bar).trace();
    cplx q = (core * da * yi * db_bar).trace() + (yi * za.transpose() * zb_bar).trace() -
             (vyi * da * yi * zb_bar.transpose()).trace() -
             (vyi * db_bar * yi * za.transpose()).trace();
    return r + prm.B * q;
  };
  return hermitian(s, t1, t2);
}

cplx disk_metric(const DiskPoint& p, const TangentVector& t1, const TangentVector& t2, double A) {
  if (!(A > 0)) throw ParameterError("disk_metric: A must be positive");
  const int n = p.n();
  CMatrix l = inverse(CMatrix(identity(n) - p.w * p.w.conjugate()));
  CMatrix r = inverse(CMatrix(identity(n) - p.w.conjugate() * p.w));
  auto s = [&](const TangentVector& a, const TangentVector& b) {
    return 4.0 * A * (l * a.d_omega * r * b.d_omega.conjugate()).trace();
  };
  return hermitian(s, t1, t2);
}

cplx jacobi_disk_metric(const JacobiDiskPoint& p, const TangentVector& t1, const TangentVector& t2,
                        const MetricParams& prm) {
  const int n = p.n(), m = p.m();
  const CMatrix I = identity(n);
  const CMatrix& w = p.w;
  const CMatrix wb = w.conjugate();
  const CMatrix& e = p.eta;
  const CMatrix eb = e.conjugate();
  CMatrix l = inverse(CMatrix(I - w * wb));   // (I - W Wbar)^-1
  CMatrix r = inverse(CMatrix(I - wb * w));   // (I - Wbar W)^-1
  CMatrix iw = inverse(CMatrix(I - w));
  CMatrix iwb = inverse(CMatrix(I - wb));
  auto s = [&](const TangentVector& a, const TangentVector& b) {
    CMatrix dw = a.d_omega, dwb = b.d_omega.conjugate();
    CMatrix de = dz_or_zero(a, m, n), deb = conj_dz(b, m, n);
    CMatrix tail = dw * r * dwb;
    cplx q = (l * de.transpose() * deb).trace();
    q += ((e * wb - eb) * l * dw * r * deb.transpose()).trace();
    q += ((eb * w - e) * r * dwb * l * de.transpose()).trace();
    q -= (l * e.transpose() * e * r * wb * tail).trace();
    q -= (w * r * eb.transpose() * eb * l * tail).trace();
    q += (l * e.transpose() * eb * l * tail).trace();
    q += (iwb * eb.transpose() * e * wb * l * tail).trace();
    q += (iwb * (I - w) * r * eb.transpose() * e * r * (I - wb) * iw * tail).trace();
    q -= (l * (I - w) * iwb * eb.transpose() * e * iw * tail).trace();
    return 4.0 * prm.A * (l * tail).trace() + 4.0 * prm.B * q;
  };
  return hermitian(s, t1, t2);
}


double volume_density(const SiegelPoint& p) {
  double d = p.omega.imag().determinant();
  return std::pow(d, -(p.n() + 1));
}

RMatrix jacobi_metric_real_gram(const JacobiPoint& p, const MetricParams& prm) {
  const int n = p.n(), m = p.m();
  std::vector<TangentVector> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (cplx c : {cplx(1, 0), kI}) {
        CMatrix d = zeros(n, n);
        d(i, j) = d(j, i) = c;
        basis.emplace_back(d, zeros(m, n));
      }
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < n; ++l)
      for (cplx c : {cplx(1, 0), kI}) {
        CMatrix d = zeros(m, n);
        d(k, l) = c;
        basis.emplace_back(zeros(n, n), d);
      }
  const int N = static_cast<int>(basis.size());
  RMatrix g(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) g(a, b) = jacobi_metric(p, basis[a], basis[b], prm).real();
  return g;
}

double fd_step(double point_norm) {
  double h = 1e-4 * (1.0 + point_norm);
  if (!(h > 1e-300) || !std::isfinite(h)) throw ParameterError("fd step underflow");
  return h;
}

namespace {

using Pair = std::pair<CMatrix, CMatrix>;  // (symmetric part, rectangular part)

// Central differences on each real coordinate of (S, R), S symmetric.
Pair fd_differential(const std::function<Pair(const Pair&)>& f, const Pair& p, const TangentVector& t) {
  const int n = static_cast<int>(p.first.rows());
  const int m = static_cast<int>(p.second.rows());
  double h = fd_step(std::max(max_abs(p.first), max_abs(p.second)));
  Pair acc{zeros(n, n), zeros(m, n)};
  auto add_dir = [&](const Pair& dir, double weight) {
    if (weight == 0.0) return;
    Pair pp{p.first + h * dir.first, p.second + h * dir.second};
    Pair pm{p.first - h * dir.first, p.second - h * dir.second};
    Pair fp = f(pp), fm = f(pm);
    acc.first += weight * (fp.first - fm.first) / (2 * h);
    acc.second += weight * (fp.second - fm.second) / (2 * h);
  };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      cplx c = t.d_omega(i, j);
      CMatrix d = zeros(n, n);
      d(i, j) = d(j, i) = 1.0;
      add_dir({d, zeros(m, n)}, c.real());
      add_dir({CMatrix(kI * d), zeros(m, n)}, c.imag());
    }
  if (t.d_z.size() != 0)
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < n; ++l) {
        cplx c = t.d_z(k, l);
        CMatrix d = zeros(m, n);
        d(k, l) = 1.0;
        add_dir({zeros(n, n), d}, c.real());
        add_dir({zeros(n, n), CMatrix(kI * d)}, c.imag());
      }
  return acc;
}

}  // namespace

TangentVector pushforward(const SymplecticElement& g, const SiegelPoint& p, const TangentVector& t,
                          PushMode mode) {
  if (mode == PushMode::exact) {
    CMatrix k = inverse(CMatrix(g.c() * p.omega + g.d()));
    return TangentVector(k.transpose() * t.d_omega * k);
  }
  auto f = [&](const Pair& x) {
    SiegelPoint q;
    q.omega = x.first;
    return Pair{act_siegel(g, q).omega, zeros(0, p.n())};
  };
  Pair d = fd_differential(f, {p.omega, zeros(0, p.n())}, TangentVector(t.d_omega));
  return TangentVector(d.first);
}

TangentVector pushforward(const JacobiGroupElement& g, const JacobiPoint& p, const TangentVector& t,
                          PushMode mode) {
  if (mode == PushMode::exact) throw ParameterError("exact pushforward is only available on H_n");
  auto f = [&](const Pair& x) {
    JacobiPoint q;
    q.omega = x.first;
    q.z = x.second;
    JacobiPoint r = act_jacobi(g, q);
    return Pair{r.omega, r.z};
  };
  Pair d = fd_differential(f, {p.omega, p.z}, t);
  return TangentVector(d.first, d.second);
}

TangentVector pushforward(const StarGroupElement& g, const DiskPoint& p, const TangentVector& t,
                          PushMode mode) {
  if (mode == PushMode::exact) throw ParameterError("exact pushforward is only available on H_n");
  auto f = [&](const Pair& x) {
    DiskPoint q;
    q.w = x.first;
    return Pair{act_disk(g, q).w, zeros(0, p.n())};
  };
  Pair d = fd_differential(f, {p.w, zeros(0, p.n())}, TangentVector(t.d_omega));
  return TangentVector(d.first);
}

TangentVector pushforward(const StarGroupElement& g, const JacobiDiskPoint& p, const TangentVector& t,
                          PushMode mode) {
  if (mode == PushMode::exact) throw ParameterError("exact pushforward is only available on H_n");
  auto f = [&](const Pair& x) {
    JacobiDiskPoint q;
    q.w = x.first;
    q.eta = x.second;
    JacobiDiskPoint r = act_jacobi_disk(g, q);
    return Pair{r.w, r.eta};
  };
  Pair d = fd_differential(f, {p.w, p.eta}, t);
  return TangentVector(d.first, d.second);
}

}  // namespace sj
