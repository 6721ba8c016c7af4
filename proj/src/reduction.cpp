#include "sj/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace sj {

namespace {

using IVec = std::vector<long long>;

RMatrix round_matrix(const RMatrix& a) { return a.array().round().matrix(); }

// Enumerate a in Z^n with ||a||_inf <= bound, excluding 0.
template <class F>
void for_each_box(int n, int bound, F f) {
  IVec a(n, -bound);
  while (true) {
    bool zero = std::all_of(a.begin(), a.end(), [](long long x) { return x == 0; });
    if (!zero) f(a);
    int i = 0;
    while (i < n && a[i] == bound) a[i++] = -bound;
    if (i == n) return;
    ++a[i];
  }
}

long long tail_gcd(const IVec& a, int k) {
  long long g = 0;
  for (size_t i = k; i < a.size(); ++i) g = std::gcd(g, std::llabs(a[i]));
  return g;
}

double quad(const RMatrix& y, const IVec& a) {
  double s = 0.0;
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += a[i] * y(i, j) * a[j];
  return s;
}

// Unimodular M (r x r) with first row v, gcd(v) = 1.
RMatrix complete_unimodular(IVec v) {
  const int r = static_cast<int>(v.size());
  RMatrix minv = RMatrix::Identity(r, r);
  auto nonzero = [&] { return std::count_if(v.begin(), v.end(), [](long long x) { return x != 0; }); };
  while (nonzero() > 1) {
    int i = -1;
    for (int k = 0; k < r; ++k)
      if (v[k] != 0 && (i < 0 || std::llabs(v[k]) < std::llabs(v[i]))) i = k;
    for (int j = 0; j < r; ++j) {
      if (j == i || v[j] == 0) continue;
      long long q = v[j] / v[i];
      v[j] -= q * v[i];
      minv.row(i) += static_cast<double>(q) * minv.row(j);
    }
  }
  int i = static_cast<int>(std::find_if(v.begin(), v.end(), [](long long x) { return x != 0; }) - v.begin());
  if (i != 0) {
    std::swap(v[0], v[i]);
    minv.row(0).swap(minv.row(i));
  }
  if (v[0] < 0) {
    v[0] = -v[0];
    minv.row(0) *= -1.0;
  }
  if (v[0] != 1) throw DomainError("complete_unimodular: vector is not primitive");
  return minv;
}

// Lattice reduction of the Gram matrix (rows of u are the basis).
void lll(RMatrix& g, RMatrix& u) {
  const int n = static_cast<int>(g.rows());
  const double delta = 0.99;
  int k = 1;
  int guard = 0;
  while (k < n) {
    if (++guard > 10000) throw ConvergenceError("minkowski_reduce: LLL did not converge");
    // Gram-Schmidt coefficients from the Gram matrix
    RMatrix mu = RMatrix::Zero(n, n);
    RVector bstar(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        double s = g(i, j);
        for (int l = 0; l < j; ++l) s -= mu(j, l) * mu(i, l) * bstar(l);
        mu(i, j) = s / bstar(j);
      }
      double s = g(i, i);
      for (int l = 0; l < i; ++l) s -= mu(i, l) * mu(i, l) * bstar(l);
      bstar(i) = s;
    }
    bool reduced_any = false;
    for (int j = k - 1; j >= 0; --j) {
      if (std::abs(mu(k, j)) <= 0.5 + 1e-12) continue;
      RMatrix t = RMatrix::Identity(n, n);
      t(k, j) = -std::round(mu(k, j));
      g = t * g * t.transpose();
      u = t * u;
      reduced_any = true;
      break;
    }
    if (reduced_any) continue;
    if (bstar(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar(k - 1)) {
      ++k;
    } else {
      RMatrix t = RMatrix::Identity(n, n);
      t.row(k).swap(t.row(k - 1));
      g = t * g * t.transpose();
      u = t * u;
      k = std::max(k - 1, 1);
    }
  }
}

SymplecticElement g_of(const RMatrix& u) {
  const int n = static_cast<int>(u.rows());
  RMatrix m = RMatrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = u;
  m.bottomRightCorner(n, n) = round_matrix(u.transpose().inverse());
  return SymplecticElement(m.cast<cplx>());
}

SymplecticElement t_of(const RMatrix& b) {
  const int n = static_cast<int>(b.rows());
  RMatrix m = RMatrix::Identity(2 * n, 2 * n);
  m.topRightCorner(n, n) = b;
  return SymplecticElement(m.cast<cplx>());
}

double det_im(const CMatrix& omega) { return omega.imag().determinant(); }

cplx factor(const SymplecticElement& g, const CMatrix& omega) { return (g.c() * omega + g.d()).determinant(); }

// Omega -> Omega - round(X); exact because |x - round(x)| <= 1/2.
RMatrix translation(const CMatrix& omega) { return -round_matrix(omega.real()); }

bool lex_less(const RMatrix& a, const RMatrix& b) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) < b(i, j)) return true;
      if (a(i, j) > b(i, j)) return false;
    }
  return false;
}

bool s3_holds(const CMatrix& omega) { return omega.real().cwiseAbs().maxCoeff() <= 0.5; }

}  // namespace

int minkowski_violations(const RMatrix& y, int bound) {
  const int n = static_cast<int>(y.rows());
  int bad = 0;
  for_each_box(n, bound, [&](const IVec& a) {
    double q = quad(y, a);
    for (int k = 0; k < n; ++k)
      if (tail_gcd(a, k) == 1 && q < y(k, k) * (1.0 - 1e-12)) ++bad;
  });
  return bad;
}

bool minkowski_m2(const RMatrix& y) {
  for (Eigen::Index k = 0; k + 1 < y.rows(); ++k)
    if (y(k, k + 1) < 0.0) return false;
  return true;
}

MinkowskiResult minkowski_reduce(const RMatrix& y, bool allow_heuristic) {
  if (y.rows() != y.cols()) throw DimensionError("minkowski_reduce: matrix must be square");
  const int n = static_cast<int>(y.rows());
  if (n > 3 && !allow_heuristic)
    throw ParameterError("minkowski_reduce: only n <= 3 is certified (pass the heuristic flag for larger n)");
  if (!is_positive_definite(y.cast<cplx>())) throw DomainError("minkowski_reduce: Y must be positive definite");
  RMatrix g = 0.5 * (y + y.transpose());
  RMatrix u = RMatrix::Identity(n, n);
  lll(g, u);
  for (int sweep = 0;; ++sweep) {
    if (sweep > 100) throw ConvergenceError("minkowski_reduce: no fixed point after 100 sweeps");
    bool changed = false;
    for (int k = 0; k < n; ++k) {
      IVec best;
      double best_q = g(k, k) * (1.0 - 1e-13);
      for_each_box(n, kMinkowskiBound, [&](const IVec& a) {
        if (tail_gcd(a, k) != 1) return;
        double q = quad(g, a);
        if (q < best_q) {
          best_q = q;
          best = a;
        }
      });
      if (best.empty()) continue;
      RMatrix t = RMatrix::Identity(n, n);
      RMatrix m = complete_unimodular(IVec(best.begin() + k, best.end()));
      t.bottomRightCorner(n - k, n - k) = m;
      for (int j = 0; j < k; ++j) t(k, j) = static_cast<double>(best[j]);
      g = t * g * t.transpose();
      u = t * u;
      changed = true;
    }
    if (!changed) break;
  }
  for (int k = 0; k + 1 < n; ++k) {
    if (g(k, k + 1) < 0.0) {
      RMatrix t = RMatrix::Identity(n, n);
      t(k + 1, k + 1) = -1.0;
      g = t * g * t.transpose();
      u = t * u;
    }
  }
  return {0.5 * (g + g.transpose()), u};
}

json to_json(const ReductionCertificate& c) {
  json j = {{"gamma", to_json(c.gamma)},
            {"iterations", c.iterations},
            {"candidates", c.candidates},
            {"enumeration_bound", c.enumeration_bound},
            {"checks", {{"M1", c.m1}, {"M2", c.m2}, {"S1", c.s1}, {"S3", c.s3}}},
            {"det_im", c.det_im}};
  if (c.heisenberg.lambda.size() != 0) {
    j["heisenberg"] = to_json(c.heisenberg);
    j["checks"]["lambda_mu_in_unit_box"] = c.lambda_mu_in_unit_box;
  }
  return j;
}

const std::vector<SymplecticElement>& siegel_candidates(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<SymplecticElement>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<SymplecticElement> gens;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (double s : {1.0, -1.0}) {
        RMatrix b = RMatrix::Zero(n, n);
        b(i, j) = b(j, i) = s;
        gens.push_back(t_of(b));
      }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    RMatrix p = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
    if (!p.isIdentity()) gens.push_back(g_of(p));
  } while (std::next_permutation(perm.begin(), perm.end()));
  gens.push_back(SymplecticElement::sigma(n));
  std::vector<SymplecticElement> out = gens;
  std::vector<SymplecticElement> layer = gens;
  for (int len = 2; len <= 3; ++len) {
    std::vector<SymplecticElement> next;
    for (const auto& w : layer)
      for (const auto& g : gens) next.push_back(multiply(g, w));
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  // partial inversions: sigma on the coordinates in S, identity elsewhere
  for (int mask = 1; mask < (1 << n); ++mask) {
    RMatrix ps = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) ps(i, i) = 1.0;
    RMatrix id = RMatrix::Identity(n, n);
    RMatrix m(2 * n, 2 * n);
    m << id - ps, -ps, ps, id - ps;
    out.emplace_back(m.cast<cplx>());
  }
  return cache.emplace(n, std::move(out)).first->second;
}

double min_candidate_factor(const SiegelPoint& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : siegel_candidates(p.n())) best = std::min(best, std::abs(factor(g, p.omega)));
  return best;
}

SiegelReduction siegel_reduce(const SiegelPoint& p, int max_iterations) {
  const int n = p.n();
  CMatrix omega = p.omega;
  SymplecticElement gamma = SymplecticElement::identity(n);
  ReductionCertificate cert;
  cert.candidates = static_cast<int>(siegel_candidates(n).size());
  auto apply = [&](const SymplecticElement& g) {
    SiegelPoint q;
    q.omega = omega;
    omega = act_siegel(g, q).omega;
    omega = 0.5 * (omega + omega.transpose()).eval();
    gamma = multiply(g, gamma);
  };
  auto translate = [&] {
    RMatrix b = translation(omega);
    if (b.isZero()) return;
    omega += b.cast<cplx>();
    gamma = multiply(t_of(b), gamma);
  };
  cert.det_im.push_back(det_im(omega));
  int it = 0;
  for (;; ++it) {
    if (it >= max_iterations) {
      cert.iterations = it;
      cert.gamma = gamma;
      throw ConvergenceError("siegel_reduce: iteration cap reached; partial certificate " + to_json(cert).dump());
    }
    if (n == 1) {
      translate();
      if (std::norm(omega(0, 0)) < 1.0) {
        apply(SymplecticElement::sigma(1));
        cert.det_im.push_back(det_im(omega));
        continue;
      }
      break;
    }
    MinkowskiResult mr = minkowski_reduce(omega.imag());
    if (!mr.u.isIdentity()) apply(g_of(mr.u));
    // keep Y exactly the reduced matrix so (M.2) is not lost to rounding
    omega = omega.real().cast<cplx>() + kI * mr.reduced.cast<cplx>();
    translate();
    // best det-Im increasing candidate; ties broken by the smallest translated X
    const auto& cands = siegel_candidates(n);
    double best = 1.0 - 1e-12;
    std::vector<const SymplecticElement*> ties;
    for (const auto& g : cands) {
      double f = std::abs(factor(g, omega));
      if (f < best * (1.0 - 1e-12)) {
        best = f;
        ties.clear();
        ties.push_back(&g);
      } else if (f < 1.0 - 1e-12 && std::abs(f - best) <= 1e-12 * best) {
        ties.push_back(&g);
      }
    }
    if (ties.empty()) break;
    const SymplecticElement* pick = ties.front();
    if (ties.size() > 1) {
      RMatrix best_x;
      for (const auto* g : ties) {
        SiegelPoint q;
        q.omega = omega;
        CMatrix w = act_siegel(*g, q).omega;
        RMatrix x = w.real() + translation(w);
        if (best_x.size() == 0 || lex_less(x, best_x)) {
          best_x = x;
          pick = g;
        }
      }
    }
    apply(*pick);
    cert.det_im.push_back(det_im(omega));
  }
  cert.iterations = it;
  cert.gamma = gamma;
  RMatrix y = omega.imag();
  cert.m1 = n == 1 ? true : minkowski_violations(y) == 0;
  cert.m2 = minkowski_m2(y);
  cert.s3 = s3_holds(omega);
  SiegelPoint out;
  out.omega = omega;
  cert.s1 = min_candidate_factor(out) >= 1.0 - 1e-12;
  return {SiegelPoint(omega), cert};
}

JacobiReduction jacobi_reduce(const JacobiPoint& p, int max_iterations) {
  const int n = p.n(), m = p.m();
  SiegelReduction sr = siegel_reduce(p.siegel(), max_iterations);
  JacobiGroupElement g{sr.cert.gamma, HeisenbergElement::identity(m, n)};
  JacobiPoint q = act_jacobi(g, p);
  q.omega = sr.point.omega;
  auto coords = [&](const JacobiPoint& x) {
    RMatrix mu = x.z.imag() * x.omega.imag().inverse();
    RMatrix lambda = x.z.real() - mu * x.omega.real();
    return std::make_pair(lambda, mu);
  };
  auto [lambda, mu] = coords(q);
  // Z + lambda0 Omega + mu0 shifts (lambda, mu) by (mu0, lambda0)
  RMatrix lambda0 = -(mu.array() + 1e-12).floor().matrix();
  RMatrix mu0 = -(lambda.array() + 1e-12).floor().matrix();
  RMatrix nn = mu0 * lambda0.transpose();
  RMatrix kappa0 = RMatrix::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) kappa0(i, j) = nn(j, i) - nn(i, j);
  HeisenbergElement h0(lambda0.cast<cplx>(), mu0.cast<cplx>(), kappa0.cast<cplx>());
  JacobiGroupElement shift{SymplecticElement::identity(n), h0};
  JacobiPoint r = act_jacobi(shift, q);
  r.omega = sr.point.omega;
  JacobiGroupElement total = jacobi_multiply(shift, g);
  JacobiReduction out{r, sr.cert, RMatrix(), RMatrix()};
  out.cert.heisenberg = total.h;
  std::tie(out.lambda, out.mu) = coords(r);
  auto guard = [](RMatrix& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a(i) < 0.0 && a(i) >= -1e-12) a(i) = 0.0;
  };
  guard(out.lambda);
  guard(out.mu);
  auto in_box = [](const RMatrix& a) { return a.size() == 0 || (a.minCoeff() >= 0.0 && a.maxCoeff() < 1.0); };
  out.cert.lambda_mu_in_unit_box = in_box(out.lambda) && in_box(out.mu);
  return out;
}

double verify_certificate(const SiegelPoint& input, const SiegelReduction& r) {
  if (!validate(r.cert.gamma)) return std::numeric_limits<double>::infinity();
  return max_abs(act_siegel(r.cert.gamma, input).omega - r.point.omega);
}

double verify_certificate(const JacobiPoint& input, const JacobiReduction& r) {
  JacobiGroupElement g{r.cert.gamma, r.cert.heisenberg};
  if (!validate(g)) return std::numeric_limits<double>::infinity();
  JacobiPoint x = act_jacobi(g, input);
  return std::max(max_abs(x.omega - r.point.omega), max_abs(x.z - r.point.z));
}

}  // namespace sj
