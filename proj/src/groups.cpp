#include "sj/groups.hpp"

#include <vector>

namespace sj {

namespace {

CMatrix j_matrix(int n) {
  CMatrix j = zeros(2 * n, 2 * n);
  j.topRightCorner(n, n) = identity(n);
  j.bottomLeftCorner(n, n) = -identity(n);
  return j;
}

bool symplectic_ok(const CMatrix& m, Tolerance tol) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) return false;
  const int n = static_cast<int>(m.rows() / 2);
  CMatrix j = j_matrix(n);
  CMatrix r = m.transpose() * j * m;
  return is_real(m, tol) && max_abs(r - j) <= tol.abs + tol.rel * max_abs(m) * max_abs(m);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

CMatrix random_real(std::mt19937_64& rng, int r, int c, double lo, double hi) {
  CMatrix a(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) a(i, k) = uniform(rng, lo, hi);
  return a;
}

CMatrix random_symmetric(std::mt19937_64& rng, int n, double lo, double hi) {
  CMatrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) b(i, k) = b(k, i) = uniform(rng, lo, hi);
  return b;
}

}  // namespace

SymplecticElement::SymplecticElement(const CMatrix& m, Tolerance tol) : mat(m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0)
    throw DimensionError("SymplecticElement: expected a 2n x 2n matrix");
  if (!symplectic_ok(m, tol)) throw DomainError("SymplecticElement: tM J M != J");
  mat = m.real().cast<cplx>();
}

SymplecticElement SymplecticElement::identity(int n) {
  SymplecticElement g;
  g.mat = sj::identity(2 * n);
  return g;
}

SymplecticElement SymplecticElement::j(int n) {
  SymplecticElement g;
  g.mat = j_matrix(n);
  return g;
}

SymplecticElement SymplecticElement::sigma(int n) {
  SymplecticElement g;
  g.mat = -j_matrix(n);
  return g;
}

SymplecticElement SymplecticElement::t(const CMatrix& b) {
  require_square(b, "t(b)");
  if (!is_symmetric(b) || !is_real(b)) throw DomainError("t(b): b must be real symmetric");
  const int n = static_cast<int>(b.rows());
  SymplecticElement g = identity(n);
  g.mat.topRightCorner(n, n) = symmetrize(b).real().cast<cplx>();
  return g;
}

SymplecticElement SymplecticElement::g(const CMatrix& alpha) {
  require_square(alpha, "g(alpha)");
  if (!is_real(alpha)) throw DomainError("g(alpha): alpha must be real");
  const int n = static_cast<int>(alpha.rows());
  CMatrix a = alpha.real().cast<cplx>();
  SymplecticElement g;
  g.mat = zeros(2 * n, 2 * n);
  g.mat.topLeftCorner(n, n) = a.transpose();
  g.mat.bottomRightCorner(n, n) = inverse(a);
  return g;
}

SymplecticElement SymplecticElement::from_blocks(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                                                 const CMatrix& d, Tolerance tol) {
  const int n = static_cast<int>(a.rows());
  for (const CMatrix* x : {&a, &b, &c, &d}) require_shape(*x, n, n, "from_blocks");
  CMatrix m(2 * n, 2 * n);
  m << a, b, c, d;
  return SymplecticElement(m, tol);
}

HeisenbergElement::HeisenbergElement(const CMatrix& l, const CMatrix& u, const CMatrix& k, Tolerance tol)
    : lambda(l), mu(u), kappa(k) {
  if (u.rows() != l.rows() || u.cols() != l.cols())
    throw DimensionError("HeisenbergElement: lambda and mu must share shape m x n");
  require_shape(k, static_cast<int>(l.rows()), static_cast<int>(l.rows()), "HeisenbergElement kappa");
  if (!validate(*this, tol))
    throw DomainError("HeisenbergElement: entries must be real and kappa + mu t(lambda) symmetric");
  lambda = l.real().cast<cplx>();
  mu = u.real().cast<cplx>();
  kappa = k.real().cast<cplx>();
}

HeisenbergElement HeisenbergElement::identity(int m, int n) {
  HeisenbergElement h;
  h.lambda = zeros(m, n);
  h.mu = zeros(m, n);
  h.kappa = zeros(m, m);
  return h;
}

JacobiGroupElement JacobiGroupElement::identity(int n, int m) {
  return {SymplecticElement::identity(n), HeisenbergElement::identity(m, n)};
}

StarGroupElement::StarGroupElement(const CMatrix& pp, const CMatrix& qq, const CMatrix& x, const CMatrix& k,
                                   Tolerance tol)
    : p(pp), q(qq), xi(x), kappa(k) {
  require_square(pp, "StarGroupElement P");
  const int n = static_cast<int>(pp.rows());
  require_shape(qq, n, n, "StarGroupElement Q");
  if (x.cols() != n) throw DimensionError("StarGroupElement: xi must be m x n");
  require_shape(k, static_cast<int>(x.rows()), static_cast<int>(x.rows()), "StarGroupElement kappa");
  if (!validate(*this, tol)) throw DomainError("StarGroupElement: (P, Q) is not in G_*");
}

StarGroupElement StarGroupElement::identity(int n, int m) {
  StarGroupElement g;
  g.p = sj::identity(n);
  g.q = zeros(n, n);
  g.xi = zeros(m, n);
  g.kappa = zeros(m, m);
  return g;
}

bool validate(const SymplecticElement& g, Tolerance tol) { return symplectic_ok(g.mat, tol); }

bool validate(const HeisenbergElement& h, Tolerance tol) {
  if (!is_real(h.lambda, tol) || !is_real(h.mu, tol) || !is_real(h.kappa, tol)) return false;
  return is_symmetric(CMatrix(h.kappa + h.mu * h.lambda.transpose()), tol);
}

bool validate(const JacobiGroupElement& g, Tolerance tol) {
  return g.h.n() == g.sp.n() && validate(g.sp, tol) && validate(g.h, tol);
}

bool validate(const StarGroupElement& g, Tolerance tol) {
  const int n = g.n();
  CMatrix r1 = g.p.transpose() * g.p.conjugate() - g.q.adjoint() * g.q;
  CMatrix r2 = g.p.transpose() * g.q.conjugate() - g.q.adjoint() * g.p;
  double scale = std::max(1.0, max_abs(g.p) * max_abs(g.p));
  double lim = tol.abs + tol.rel * scale;
  return max_abs(r1 - identity(n)) <= lim && max_abs(r2) <= lim && is_real(g.kappa, tol);
}

SymplecticElement multiply(const SymplecticElement& a, const SymplecticElement& b) {
  if (a.n() != b.n()) throw DimensionError("multiply: degree mismatch");
  SymplecticElement r;
  r.mat = a.mat * b.mat;
  return r;
}

HeisenbergElement heisenberg_multiply(const HeisenbergElement& a, const HeisenbergElement& b) {
  if (a.m() != b.m() || a.n() != b.n()) throw DimensionError("heisenberg_multiply: shape mismatch");
  HeisenbergElement r;
  r.lambda = a.lambda + b.lambda;
  r.mu = a.mu + b.mu;
  r.kappa = a.kappa + b.kappa + a.lambda * b.mu.transpose() - a.mu * b.lambda.transpose();
  return r;
}

JacobiGroupElement jacobi_multiply(const JacobiGroupElement& a, const JacobiGroupElement& b) {
  if (a.n() != b.n() || a.m() != b.m()) throw DimensionError("jacobi_multiply: degree mismatch");
  // (lambda~, mu~) = (lambda, mu) M'
  HeisenbergElement shifted;
  shifted.lambda = a.h.lambda * b.sp.a() + a.h.mu * b.sp.c();
  shifted.mu = a.h.lambda * b.sp.b() + a.h.mu * b.sp.d();
  shifted.kappa = a.h.kappa;
  return {multiply(a.sp, b.sp), heisenberg_multiply(shifted, b.h)};
}

StarGroupElement star_multiply(const StarGroupElement& a, const StarGroupElement& b) {
  if (a.n() != b.n() || a.m() != b.m()) throw DimensionError("star_multiply: degree mismatch");
  StarGroupElement r;
  r.p = a.p * b.p + a.q * b.q.conjugate();
  r.q = a.p * b.q + a.q * b.p.conjugate();
  CMatrix xt = a.xi * b.p + a.xi.conjugate() * b.q.conjugate();
  r.xi = xt + b.xi;
  CMatrix cross = xt * b.xi.adjoint();
  r.kappa = a.kappa + b.kappa - 4.0 * cross.imag().cast<cplx>();
  return r;
}

SymplecticElement inverse(const SymplecticElement& g) {
  const int n = g.n();
  SymplecticElement r;
  r.mat.resize(2 * n, 2 * n);
  r.mat << g.d().transpose(), -g.b().transpose(), -g.c().transpose(), g.a().transpose();
  return r;
}

HeisenbergElement inverse(const HeisenbergElement& h) {
  HeisenbergElement r;
  r.lambda = -h.lambda;
  r.mu = -h.mu;
  r.kappa = -h.kappa;
  return r;
}

JacobiGroupElement inverse(const JacobiGroupElement& g) {
  SymplecticElement mi = inverse(g.sp);
  CMatrix lt = g.h.lambda * mi.a() + g.h.mu * mi.c();
  CMatrix mt = g.h.lambda * mi.b() + g.h.mu * mi.d();
  HeisenbergElement h;
  h.lambda = -lt;
  h.mu = -mt;
  h.kappa = -g.h.kappa + lt * mt.transpose() - mt * lt.transpose();
  return {mi, h};
}

SiegelPoint act_siegel(const SymplecticElement& g, const SiegelPoint& p) {
  if (g.n() != p.n()) throw DimensionError("act_siegel: degree mismatch");
  CMatrix den = g.c() * p.omega + g.d();
  SiegelPoint r;
  r.omega = symmetrize(CMatrix((g.a() * p.omega + g.b()) * inverse(den)));
  return r;
}

JacobiPoint act_jacobi(const JacobiGroupElement& g, const JacobiPoint& p) {
  if (g.n() != p.n() || g.m() != p.m()) throw DimensionError("act_jacobi: degree mismatch");
  CMatrix den_inv = inverse(CMatrix(g.sp.c() * p.omega + g.sp.d()));
  JacobiPoint r;
  r.omega = symmetrize(CMatrix((g.sp.a() * p.omega + g.sp.b()) * den_inv));
  r.z = (p.z + g.h.lambda * p.omega + g.h.mu) * den_inv;
  return r;
}

DiskPoint act_disk(const StarGroupElement& g, const DiskPoint& w) {
  if (g.n() != w.n()) throw DimensionError("act_disk: degree mismatch");
  CMatrix den = g.q.conjugate() * w.w + g.p.conjugate();
  DiskPoint r;
  r.w = symmetrize(CMatrix((g.p * w.w + g.q) * inverse(den)));
  return r;
}

JacobiDiskPoint act_jacobi_disk(const StarGroupElement& g, const JacobiDiskPoint& p) {
  if (g.n() != p.n() || g.m() != p.m()) throw DimensionError("act_jacobi_disk: degree mismatch");
  CMatrix den_inv = inverse(CMatrix(g.q.conjugate() * p.w + g.p.conjugate()));
  JacobiDiskPoint r;
  r.w = symmetrize(CMatrix((g.p * p.w + g.q) * den_inv));
  r.eta = (p.eta + g.xi * p.w + g.xi.conjugate()) * den_inv;
  return r;
}

StarGroupElement embed_star(const SymplecticElement& g, int m) {
  StarGroupElement r;
  CMatrix a = g.a(), b = g.b(), c = g.c(), d = g.d();
  r.p = 0.5 * ((a + d) + kI * (b - c));
  r.q = 0.5 * ((a - d) - kI * (b + c));
  r.xi = zeros(m, g.n());
  r.kappa = zeros(m, m);
  return r;
}

StarGroupElement embed_star(const JacobiGroupElement& g) {
  StarGroupElement r = embed_star(g.sp, g.m());
  r.xi = 0.5 * (g.h.lambda + kI * g.h.mu);
  r.kappa = g.h.kappa;
  return r;
}

SymplecticElement random_symplectic(std::mt19937_64& rng, int n, int length) {
  if (length < 0) length = std::uniform_int_distribution<int>(1, 6)(rng);
  SymplecticElement g = SymplecticElement::identity(n);
  for (int k = 0; k < length; ++k) {
    int which = std::uniform_int_distribution<int>(0, 2)(rng);
    SymplecticElement s;
    if (which == 0)
      s = SymplecticElement::t(random_symmetric(rng, n, -1.0, 1.0));
    else if (which == 1)
      s = SymplecticElement::g(CMatrix(identity(n) + random_real(rng, n, n, -0.3, 0.3)));
    else
      s = SymplecticElement::sigma(n);
    g = multiply(g, s);
  }
  return g;
}

HeisenbergElement random_heisenberg(std::mt19937_64& rng, int m, int n) {
  HeisenbergElement h;
  h.lambda = random_real(rng, m, n, -1.0, 1.0);
  h.mu = random_real(rng, m, n, -1.0, 1.0);
  // kappa = S - mu t(lambda) with S symmetric keeps the constraint exact
  h.kappa = random_symmetric(rng, m, -1.0, 1.0) - h.mu * h.lambda.transpose();
  return h;
}

JacobiGroupElement random_jacobi(std::mt19937_64& rng, int n, int m, int length) {
  SymplecticElement sp = random_symplectic(rng, n, length);
  HeisenbergElement h = length == 0 ? HeisenbergElement::identity(m, n) : random_heisenberg(rng, m, n);
  return {sp, h};
}

RandomElement random_element(std::uint64_t seed, GroupKind kind, int n, int m, int length) {
  std::mt19937_64 rng(seed);
  RandomElement r;
  r.kind = kind;
  r.jacobi = JacobiGroupElement::identity(n, m);
  switch (kind) {
    case GroupKind::symplectic:
      r.jacobi.sp = random_symplectic(rng, n, length);
      break;
    case GroupKind::heisenberg:
      if (length != 0) r.jacobi.h = random_heisenberg(rng, m, n);
      break;
    case GroupKind::jacobi:
    case GroupKind::star:
      r.jacobi = random_jacobi(rng, n, m, length);
      break;
  }
  r.star = embed_star(r.jacobi);
  return r;
}

GroupKind parse_group_kind(const std::string& s) {
  if (s == "symplectic") return GroupKind::symplectic;
  if (s == "heisenberg") return GroupKind::heisenberg;
  if (s == "jacobi") return GroupKind::jacobi;
  if (s == "star") return GroupKind::star;
  throw ParameterError("unknown group kind '" + s + "'");
}

namespace {

CMatrix word_argument(const std::string& arg, int n) {
  json j;
  try {
    j = json::parse(arg);
  } catch (const json::parse_error&) {
    j = arg;  // scalar literal
  }
  CMatrix a = matrix_from_json(j);
  if (a.rows() == 1 && a.cols() == 1 && n > 1) return a(0, 0) * identity(n);
  require_shape(a, n, n, "word argument");
  return a;
}

}  // namespace

SymplecticElement parse_word(const std::string& word, int n) {
  SymplecticElement g = SymplecticElement::identity(n);
  int depth = 0;
  std::string cur;
  std::vector<std::string> parts;
  for (char ch : word) {
    if (ch == '(' || ch == '[' || ch == '{') ++depth;
    if (ch == ')' || ch == ']' || ch == '}') --depth;
    if (ch == ';' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  for (std::string p : parts) {
    p.erase(0, p.find_first_not_of(" \t"));
    p.erase(p.find_last_not_of(" \t") + 1);
    if (p.empty()) continue;
    SymplecticElement s;
    if (p == "s") {
      s = SymplecticElement::sigma(n);
    } else if ((p[0] == 't' || p[0] == 'g') && p.size() > 3 && p[1] == '(' && p.back() == ')') {
      CMatrix arg = word_argument(p.substr(2, p.size() - 3), n);
      s = p[0] == 't' ? SymplecticElement::t(arg) : SymplecticElement::g(arg);
    } else {
      throw ParameterError("malformed generator '" + p + "' (expected t(b), g(a) or s)");
    }
    g = multiply(g, s);
  }
  return g;
}

json to_json(const SymplecticElement& g) { return {{"M", matrix_to_json(g.mat)}}; }

json to_json(const HeisenbergElement& h) {
  return {{"lambda", matrix_to_json(h.lambda)}, {"mu", matrix_to_json(h.mu)},
          {"kappa", matrix_to_json(h.kappa)}};
}

json to_json(const JacobiGroupElement& g) {
  json j = to_json(g.h);
  j["M"] = matrix_to_json(g.sp.mat);
  return j;
}

json to_json(const StarGroupElement& g) {
  return {{"P", matrix_to_json(g.p)}, {"Q", matrix_to_json(g.q)}, {"xi", matrix_to_json(g.xi)},
          {"kappa", matrix_to_json(g.kappa)}};
}

JacobiGroupElement jacobi_element_from_json(const json& j) {
  for (const char* k : {"M", "lambda", "mu", "kappa"})
    if (!j.contains(k)) throw ParameterError(std::string("group element JSON is missing '") + k + "'");
  return {SymplecticElement(matrix_from_json(j.at("M"))),
          HeisenbergElement(matrix_from_json(j.at("lambda")), matrix_from_json(j.at("mu")),
                            matrix_from_json(j.at("kappa")))};
}

}  // namespace sj
