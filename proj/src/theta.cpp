#include "sj/theta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <string>

#include "sj/kernels.hpp"

namespace sj {

namespace {

using Eval = std::function<cplx(const RMatrix&)>;

double min_eig(const RMatrix& s) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (s + s.transpose()));
  return es.eigenvalues()(0);
}

RMatrix sqrt_spd(const RMatrix& s) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (s + s.transpose()));
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

// sigma(M x A tx) and sigma(M x tb) for x real, A and b complex
cplx quad_form(const RMatrix& m, const CMatrix& x, const CMatrix& a) {
  return (m.cast<cplx>() * x * a * x.transpose()).trace();
}
cplx lin_form(const RMatrix& m, const CMatrix& x, const CMatrix& b) {
  return (m.cast<cplx>() * x * b.transpose()).trace();
}

// Sum of principal logs of the eigenvalues of a complex symmetric A with Re A > 0.
cplx log_det_principal(const CMatrix& a) {
  Eigen::ComplexEigenSolver<CMatrix> es(a);
  cplx s = 0.0;
  for (int i = 0; i < a.rows(); ++i) s += std::log(es.eigenvalues()(i));
  return s;
}

bool near_multiple_of_pi(double phi, long& k, bool& exact) {
  k = std::lround(phi / kPi);
  const double dist = std::abs(phi - static_cast<double>(k) * kPi);
  exact = dist <= 1e-14 * std::max(1.0, std::abs(phi));
  return dist < 1e-6;
}

}  // namespace

struct GridFunction::Impl {
  RMatrix metric;
  int m = 1, n = 1;
  bool product = true;
  Polynomial poly{1, 1};
  GaussianPart g;
  Eval eval;     // lazy kind
  Envelope env;  // lazy kind
};

namespace {

using Impl = GridFunction::Impl;

GridFunction make(Impl impl) { return GridFunction(std::make_shared<const Impl>(std::move(impl))); }

cplx eval_product(const Impl& f, const RMatrix& x) {
  const CMatrix xc = x.cast<cplx>();
  const cplx e = f.g.log_scale - kPi * quad_form(f.metric, xc, f.g.a) - 2.0 * kPi * lin_form(f.metric, xc, f.g.b);
  return f.poly.evaluate(xc) * std::exp(e);
}

Envelope product_envelope(const Impl& f) {
  const RMatrix ar = f.g.a.real();
  const RMatrix br = f.g.b.real();
  const RMatrix x0 = -br * ar.inverse();
  const double peak =
      std::exp(f.g.log_scale.real() + kPi * (f.metric * x0 * ar * x0.transpose()).trace());
  const double mu_min = min_eig(f.metric);
  const int deg = f.poly.degree();
  double coef = 0.0;
  for (const auto& [e, c] : f.poly.terms()) coef += std::abs(c);
  const double grow = (1.0 + x0.norm()) * std::max(1.0, 1.0 / std::sqrt(mu_min));
  Envelope env;
  env.scale = peak * coef * std::pow(grow, deg);
  env.degree = deg;
  env.decay = min_eig(ar);
  env.center = x0;
  return env;
}

void check_gaussian(const RMatrix& metric, const Polynomial& p, const GaussianPart& g) {
  const int m = static_cast<int>(metric.rows());
  if (metric.cols() != m || m < 1) throw DimensionError("GridFunction: metric must be square");
  if (min_eig(metric) <= 0.0) throw DomainError("GridFunction: metric must be positive definite");
  const int n = p.n();
  if (p.m() != m) throw DimensionError("GridFunction: polynomial shape mismatch");
  require_shape(g.a, n, n, "GridFunction: A");
  require_shape(g.b, m, n, "GridFunction: b");
  if (max_abs(g.a - g.a.transpose()) > 1e-12 * std::max(1.0, max_abs(g.a)))
    throw DomainError("GridFunction: A must be symmetric");
  if (min_eig(g.a.real()) <= 0.0) throw DomainError("GridFunction: Re A must be positive definite");
}

Impl product_impl(const RMatrix& metric, Polynomial p, GaussianPart g) {
  Impl r;
  r.metric = metric;
  r.m = static_cast<int>(metric.rows());
  r.n = p.n();
  r.product = true;
  r.poly = std::move(p);
  r.g = std::move(g);
  return r;
}

Impl lazy_impl(const Impl& base, Eval eval, Envelope env) {
  Impl r;
  r.metric = base.metric;
  r.m = base.m;
  r.n = base.n;
  r.product = false;
  r.poly = Polynomial(base.m, base.n);
  r.eval = std::move(eval);
  r.env = std::move(env);
  return r;
}

cplx eval_impl(const Impl& f, const RMatrix& x) { return f.product ? eval_product(f, x) : f.eval(x); }

// ---- transforms on the closed form and on lazy functions ----

GridFunction apply_unit(const GridFunction& f, cplx t) {
  if (t == cplx(1.0, 0.0)) return f;
  const Impl& fi = *f.impl();
  if (fi.product) {
    Impl r = fi;
    r.poly = fi.poly * t;
    return make(std::move(r));
  }
  Envelope env = fi.env;
  env.scale *= std::abs(t);
  auto src = f.impl();
  return make(lazy_impl(fi, [src, t](const RMatrix& x) { return t * eval_impl(*src, x); }, env));
}

GridFunction apply_heisenberg(const GridFunction& f, const RMatrix& lam, const RMatrix& mu, const RMatrix& kappa) {
  const Impl& fi = *f.impl();
  const RMatrix& mm = fi.metric;
  const cplx phase0 = kI * kPi * (mm * (kappa + mu * lam.transpose())).trace();
  if (fi.product) {
    const CMatrix lc = lam.cast<cplx>();
    GaussianPart g = fi.g;
    g.b = fi.g.b + lc * fi.g.a - kI * mu.cast<cplx>();
    g.log_scale = fi.g.log_scale - kPi * quad_form(mm, lc, fi.g.a) - 2.0 * kPi * lin_form(mm, lc, fi.g.b) + phase0;
    std::vector<Polynomial> images;
    for (int p = 0; p < fi.m; ++p)
      for (int i = 0; i < fi.n; ++i)
        images.push_back(Polynomial::variable(fi.m, fi.n, p, i) + Polynomial::constant(fi.m, fi.n, lam(p, i)));
    return make(product_impl(mm, fi.poly.substitute(images), g));
  }
  Envelope env = fi.env;
  env.center = fi.env.center - lam;
  auto src = f.impl();
  return make(lazy_impl(fi,
                        [src, lam, mu, phase0](const RMatrix& x) {
                          const cplx ph = phase0 + 2.0 * kI * kPi * (src->metric * x * mu.transpose()).trace();
                          return std::exp(ph) * eval_impl(*src, x + lam);
                        },
                        env));
}

GridFunction apply_chirp(const GridFunction& f, const RMatrix& b) {
  const Impl& fi = *f.impl();
  if (fi.product) {
    Impl r = fi;
    r.g.a = fi.g.a - kI * b.cast<cplx>();
    return make(std::move(r));
  }
  auto src = f.impl();
  return make(lazy_impl(fi,
                        [src, b](const RMatrix& x) {
                          const double q = (src->metric * x * b * x.transpose()).trace();
                          return std::exp(kI * kPi * q) * eval_impl(*src, x);
                        },
                        fi.env));
}

GridFunction apply_dilation(const GridFunction& f, const RMatrix& alpha) {
  const Impl& fi = *f.impl();
  const double det = alpha.determinant();
  if (std::abs(det) < 1e-300) throw DomainError("g(alpha): alpha must be invertible");
  const double jac = std::pow(std::abs(det), 0.5 * fi.m);
  if (fi.product) {
    GaussianPart g = fi.g;
    const CMatrix ac = alpha.cast<cplx>();
    g.a = ac.transpose() * fi.g.a * ac;
    g.b = fi.g.b * ac;
    g.log_scale = fi.g.log_scale + std::log(jac);
    std::vector<Polynomial> images;
    for (int p = 0; p < fi.m; ++p)
      for (int i = 0; i < fi.n; ++i) {
        Polynomial im(fi.m, fi.n);
        for (int j = 0; j < fi.n; ++j)
          if (alpha(i, j) != 0.0) im = im + Polynomial::variable(fi.m, fi.n, p, j) * cplx(alpha(i, j), 0.0);
        images.push_back(im);
      }
    return make(product_impl(fi.metric, fi.poly.substitute(images), g));
  }
  Eigen::JacobiSVD<RMatrix> svd(alpha);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  Envelope env = fi.env;
  env.center = fi.env.center * alpha.transpose().inverse();
  env.decay = fi.env.decay * smin * smin;
  env.scale = fi.env.scale * jac * std::pow(std::max(1.0, smax), fi.env.degree);
  auto src = f.impl();
  return make(lazy_impl(fi, [src, alpha, jac](const RMatrix& x) { return jac * eval_impl(*src, x * alpha.transpose()); },
                        env));
}

GaussianPart sigma_exact(const RMatrix& metric, const GaussianPart& g) {
  const int m = static_cast<int>(metric.rows());
  const CMatrix ainv = g.a.inverse();
  GaussianPart r;
  r.a = symmetrize(ainv);
  r.b = -kI * g.b * ainv;
  r.log_scale = g.log_scale + kPi * (metric.cast<cplx>() * g.b * ainv * g.b.transpose()).trace() -
                0.5 * m * log_det_principal(g.a);
  return r;
}

// Trapezoid evaluation of int P(x) G(x) e^{-2 pi i sigma(M y tx)} (det M)^{n/2} dy for mn <= 2,
// in the coordinates w = M^{1/2} y where every row separates.
class SigmaQuadrature {
 public:
  SigmaQuadrature(const RMatrix& metric, const Polynomial& p, const GaussianPart& g, const QuadratureConfig& cfg)
      : metric_(metric), poly_(p), g_(g), cfg_(cfg) {
    m_ = static_cast<int>(metric.rows());
    n_ = p.n();
    d_ = m_ * n_;
    if (d_ > 2) throw DomainError("oscillatory quadrature supports mn <= 2");
    s_ = sqrt_spd(metric);
    sinv_ = s_.inverse();
    deg_ = p.degree();

    const RMatrix ar = g.a.real();
    const RMatrix x0 = -g.b.real() * ar.inverse();
    const RMatrix cw = s_ * x0;
    const double lam = min_eig(ar);
    center_.resize(d_);
    for (int p2 = 0; p2 < m_; ++p2)
      for (int i = 0; i < n_; ++i) center_[p2 * n_ + i] = cw(p2, i);
    const double cnorm = cw.norm();
    extent_ = 0.5;
    while (-kPi * lam * extent_ * extent_ + deg_ * std::log((1.0 + extent_ + cnorm) / (1.0 + cnorm)) > std::log(1e-17))
      extent_ += 0.05;

    const CMatrix ainv = g.a.inverse();
    const RMatrix rre = 0.5 * (ainv.real() + ainv.real().transpose());
    const double lr = min_eig(rre);
    if (lr <= 0.0) throw NumericError("oscillatory quadrature: transform is not decaying");
    const CMatrix bt = s_.cast<cplx>() * g.b;
    eta_.resize(d_);
    const RMatrix rinv = rre.inverse();
    for (int k = 0; k < m_; ++k) {
      const Eigen::VectorXcd v = ainv * bt.row(k).transpose();
      const RVector e = -rinv * v.imag();
      for (int i = 0; i < n_; ++i) eta_[k * n_ + i] = e(i);
    }
    band_ = std::sqrt((cfg.alias_exponent + 2.0 * deg_) / (kPi * lr)) + 0.5 * deg_;
  }

  cplx operator()(const RMatrix& z) const {
    const RMatrix zt = s_ * z;
    double xi[2] = {0.0, 0.0};
    double off = 0.0;
    for (int p = 0; p < m_; ++p)
      for (int i = 0; i < n_; ++i) {
        xi[p * n_ + i] = zt(p, i);
        off = std::max(off, std::abs(zt(p, i) - eta_[p * n_ + i]));
      }
    const double need = off + band_;
    int k = 0;
    while (band_ * std::ldexp(1.0, k) < need) ++k;
    std::shared_ptr<const Level> lv;
    bool fresh = false;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = levels_.find(k);
      if (it == levels_.end()) {
        lv = build(1.0 / (band_ * std::ldexp(1.0, k)));
        levels_[k] = lv;
        fresh = true;
      } else {
        lv = it->second;
      }
    }
    const cplx val = sum(*lv, xi);
    if (fresh) {
      const auto check = build(0.8 * lv->h);
      const cplx alt = sum(*check, xi);
      if (std::abs(val - alt) > cfg_.divergence_tol * std::max(lv->l1, 1e-300))
        throw AccuracyError("oscillatory quadrature: two-resolution estimates disagree");
    }
    return val;
  }

 private:
  struct Level {
    double h = 0.0;
    int count[2] = {1, 1};
    double y0[2] = {0.0, 0.0};
    std::vector<cplx> samples;
    double l1 = 0.0;
  };

  std::shared_ptr<const Level> build(double h) const {
    auto lv = std::make_shared<Level>();
    lv->h = h;
    const int half = static_cast<int>(std::ceil(extent_ / h));
    for (int a = 0; a < d_; ++a) {
      lv->count[a] = 2 * half + 1;
      lv->y0[a] = center_[a] - half * h;
    }
    if (lv->count[0] > cfg_.max_points_per_axis)
      throw AccuracyError("oscillatory quadrature: grid exceeds the configured point budget");
    const int n0 = lv->count[0], n1 = d_ == 2 ? lv->count[1] : 1;
    lv->samples.resize(static_cast<std::size_t>(n0) * n1);
    RMatrix w(m_, n_);
    const Impl base = product_impl(metric_, poly_, g_);
    double l1 = 0.0;
    for (int j0 = 0; j0 < n0; ++j0)
      for (int j1 = 0; j1 < n1; ++j1) {
        const double c[2] = {lv->y0[0] + j0 * h, d_ == 2 ? lv->y0[1] + j1 * h : 0.0};
        for (int a = 0; a < d_; ++a) w(a / n_, a % n_) = c[a];
        const cplx v = eval_product(base, sinv_ * w);
        lv->samples[static_cast<std::size_t>(j0) * n1 + j1] = v;
        l1 += std::abs(v);
      }
    lv->l1 = l1 * std::pow(h, d_);
    return lv;
  }

  cplx sum(const Level& lv, const double* xi) const {
    const double h = lv.h;
    if (d_ == 1) return h * kernels::phase_sum(lv.samples.data(), lv.count[0], 2.0 * kPi * xi[0], lv.y0[0], h);
    std::vector<cplx> rows(lv.count[0]);
    for (int j0 = 0; j0 < lv.count[0]; ++j0)
      rows[j0] = kernels::phase_sum(lv.samples.data() + static_cast<std::size_t>(j0) * lv.count[1], lv.count[1],
                                    2.0 * kPi * xi[1], lv.y0[1], h);
    return h * h * kernels::phase_sum(rows.data(), rows.size(), 2.0 * kPi * xi[0], lv.y0[0], h);
  }

  RMatrix metric_;
  Polynomial poly_;
  GaussianPart g_;
  QuadratureConfig cfg_;
  int m_ = 1, n_ = 1, d_ = 1, deg_ = 0;
  RMatrix s_, sinv_;
  std::vector<double> center_, eta_;
  double extent_ = 0.0, band_ = 0.0;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const Level>> levels_;
};

GridFunction apply_sigma(const GridFunction& f, const ThetaContext& ctx) {
  const Impl& fi = *f.impl();
  if (!fi.product) throw DomainError("sigma: the input must be a polynomial times a Gaussian");
  const GaussianPart gh = sigma_exact(fi.metric, fi.g);
  if (f.is_gaussian() && !ctx.quad.force) {
    return make(product_impl(fi.metric, fi.poly, gh));
  }
  auto quad = std::make_shared<SigmaQuadrature>(fi.metric, fi.poly, fi.g, ctx.quad);
  Eval eval = [quad](const RMatrix& x) { return (*quad)(x); };

  // Envelope of P~ * G^: decay and center from the exact transform of G, the constant from
  // probes around the center with a safety factor of 4.
  const Impl ghat = product_impl(fi.metric, Polynomial::constant(fi.m, fi.n, 1.0), gh);
  Envelope env = product_envelope(ghat);
  env.degree = fi.poly.degree();
  const RMatrix& mm = fi.metric;
  auto unit_env = [&](const RMatrix& x) {
    const RMatrix d = x - env.center;
    const double r = std::sqrt(std::max(0.0, (mm * d * d.transpose()).trace()));
    return std::pow(1.0 + r, env.degree) * std::exp(-kPi * env.decay * r * r);
  };
  double k = 0.0;
  const double step = 1.0 / std::sqrt(env.decay);
  for (int a = -1; a < fi.m * fi.n; ++a)
    for (double t : {-1.0, -0.5, 0.5, 1.0}) {
      if (a < 0 && t != 1.0) continue;
      RMatrix x = env.center;
      if (a >= 0) x(a / fi.n, a % fi.n) += t * step;
      k = std::max(k, std::abs(eval(x)) / unit_env(x));
    }
  env.scale = 4.0 * k;
  return make(lazy_impl(fi, std::move(eval), env));
}

RMatrix real_of(const CMatrix& a) { return a.real(); }

}  // namespace

// ---- ThetaContext / GridFunction ----

ThetaContext::ThetaContext(const RMatrix& mm, int n_, int n_cut_, const QuadratureConfig& q)
    : m_mat(mm), n(n_), n_cut(n_cut_), quad(q) {
  if (mm.rows() != mm.cols() || mm.rows() < 1) throw DimensionError("ThetaContext: M must be square");
  if (n < 1) throw DimensionError("ThetaContext: n must be positive");
  if (n_cut < 0) throw ParameterError("ThetaContext: N_cut must be >= 1 (or 0 for automatic)");
  if ((mm - mm.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("ThetaContext: M must be symmetric");
  for (int i = 0; i < mm.rows(); ++i)
    for (int j = 0; j < mm.cols(); ++j)
      if (std::abs(mm(i, j) - std::round(mm(i, j))) > 1e-12) throw DomainError("ThetaContext: M must be integral");
  if (min_eig(mm) <= 0.0) throw DomainError("ThetaContext: M must be positive definite");
}

GridFunction GridFunction::gaussian(const RMatrix& m_mat, int n, cplx a) {
  const int m = static_cast<int>(m_mat.rows());
  GaussianPart g;
  g.a = a * identity(n);
  g.b = zeros(m, n);
  Polynomial p = Polynomial::constant(m, n, 1.0);
  check_gaussian(m_mat, p, g);
  return make(product_impl(m_mat, p, g));
}

GridFunction GridFunction::product(const RMatrix& m_mat, const Polynomial& p, const GaussianPart& g) {
  check_gaussian(m_mat, p, g);
  return make(product_impl(m_mat, p, g));
}

int GridFunction::m() const { return impl_->m; }
int GridFunction::n() const { return impl_->n; }
const RMatrix& GridFunction::metric() const { return impl_->metric; }

cplx GridFunction::operator()(const RMatrix& x) const {
  if (x.rows() != impl_->m || x.cols() != impl_->n) throw DimensionError("GridFunction: argument shape mismatch");
  const cplx v = eval_impl(*impl_, x);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericError("GridFunction: non-finite value");
  return v;
}

bool GridFunction::is_product() const { return impl_->product; }

bool GridFunction::is_gaussian() const {
  if (!impl_->product) return false;
  const auto& t = impl_->poly.terms();
  return t.size() == 1 && t.begin()->first == Polynomial::Exponent(impl_->m * impl_->n, 0);
}

const Polynomial& GridFunction::polynomial() const {
  if (!impl_->product) throw DomainError("GridFunction: no closed form");
  return impl_->poly;
}

const GaussianPart& GridFunction::gaussian_part() const {
  if (!impl_->product) throw DomainError("GridFunction: no closed form");
  return impl_->g;
}

Envelope GridFunction::envelope() const { return impl_->product ? product_envelope(*impl_) : impl_->env; }

std::vector<RMatrix> sample_points(const SampleGrid& grid, int m, int n) {
  if (grid.spacing <= 0.0 || grid.extent <= 0.0) throw ParameterError("SampleGrid: extent and spacing must be positive");
  const double ratio = grid.extent / grid.spacing;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) throw ParameterError("SampleGrid: extent / spacing must be an integer");
  const int half = static_cast<int>(std::round(ratio));
  const int per = 2 * half + 1;
  const int d = m * n;
  const double total = std::pow(static_cast<double>(per), d);
  std::vector<RMatrix> pts;
  if (total <= 20000) {
    std::vector<int> idx(d, 0);
    while (true) {
      RMatrix x(m, n);
      for (int a = 0; a < d; ++a) x(a / n, a % n) = (idx[a] - half) * grid.spacing;
      pts.push_back(x);
      int a = 0;
      while (a < d && ++idx[a] == per) idx[a++] = 0;
      if (a == d) break;
    }
    return pts;
  }
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> pick(0, per - 1);
  for (int s = 0; s < 2000; ++s) {
    RMatrix x(m, n);
    for (int a = 0; a < d; ++a) x(a / n, a % n) = (pick(rng) - half) * grid.spacing;
    pts.push_back(x);
  }
  return pts;
}

// ---- representations ----

GridFunction schrodinger_action(const HeisenbergElement& h, const GridFunction& f) {
  if (h.m() != f.m() || h.n() != f.n()) throw DimensionError("schrodinger_action: shape mismatch");
  return apply_heisenberg(f, real_of(h.lambda), real_of(h.mu), real_of(h.kappa));
}

WeilGenerator WeilGenerator::heisenberg(const HeisenbergElement& h, cplx unit) {
  WeilGenerator g;
  g.kind = Kind::heisenberg;
  g.h = h;
  g.unit = unit;
  return g;
}

WeilGenerator WeilGenerator::t(const RMatrix& b, cplx unit) {
  if (b.rows() != b.cols()) throw DimensionError("t(b): b must be square");
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("t(b): b must be symmetric");
  WeilGenerator g;
  g.kind = Kind::t;
  g.b = b;
  g.unit = unit;
  return g;
}

WeilGenerator WeilGenerator::g(const RMatrix& alpha, cplx unit) {
  if (alpha.rows() != alpha.cols()) throw DimensionError("g(alpha): alpha must be square");
  WeilGenerator r;
  r.kind = Kind::g;
  r.alpha = alpha;
  r.unit = unit;
  return r;
}

WeilGenerator WeilGenerator::sigma(int n, cplx unit) {
  WeilGenerator g;
  g.kind = Kind::sigma;
  g.b = RMatrix::Zero(n, n);
  g.unit = unit;
  return g;
}

SymplecticElement WeilGenerator::symplectic(int n) const {
  switch (kind) {
    case Kind::heisenberg: return SymplecticElement::identity(n);
    case Kind::t: return SymplecticElement::t(b.cast<cplx>());
    case Kind::g: return SymplecticElement::g(alpha.cast<cplx>());
    case Kind::sigma: return SymplecticElement::sigma(n);
  }
  return SymplecticElement::identity(n);
}

GridFunction weil_generator_action(const WeilGenerator& gen, const GridFunction& f, const ThetaContext& ctx) {
  if (std::abs(std::abs(gen.unit) - 1.0) > 1e-12) throw ParameterError("weil generator: t must have modulus one");
  if (f.n() != ctx.n || f.m() != ctx.m()) throw DimensionError("weil generator: function shape does not match context");
  GridFunction r = f;
  switch (gen.kind) {
    case WeilGenerator::Kind::heisenberg: r = schrodinger_action(gen.h, f); break;
    case WeilGenerator::Kind::t:
      if (gen.b.rows() != f.n()) throw DimensionError("t(b): b must be n x n");
      r = apply_chirp(f, gen.b);
      break;
    case WeilGenerator::Kind::g:
      if (gen.alpha.rows() != f.n()) throw DimensionError("g(alpha): alpha must be n x n");
      r = apply_dilation(f, gen.alpha);
      break;
    case WeilGenerator::Kind::sigma: r = apply_sigma(f, ctx); break;
  }
  return apply_unit(r, gen.unit);
}

double stone_von_neumann_check(const WeilGenerator& gen, const HeisenbergElement& h, const GridFunction& f,
                               const ThetaContext& ctx, const SampleGrid& grid) {
  HeisenbergElement hc;
  if (gen.kind == WeilGenerator::Kind::heisenberg) {
    hc = heisenberg_multiply(heisenberg_multiply(gen.h, h), inverse(gen.h));
  } else {
    JacobiGroupElement gj{gen.symplectic(f.n()), HeisenbergElement::identity(f.m(), f.n())};
    JacobiGroupElement hj{SymplecticElement::identity(f.n()), h};
    hc = jacobi_multiply(jacobi_multiply(gj, hj), inverse(gj)).h;
  }
  const GridFunction lhs = weil_generator_action(gen, schrodinger_action(h, f), ctx);
  const GridFunction rhs = schrodinger_action(hc, weil_generator_action(gen, f, ctx));
  double res = 0.0;
  for (const RMatrix& x : sample_points(grid, f.m(), f.n())) res = std::max(res, std::abs(lhs(x) - rhs(x)));
  return res;
}

GridFunction rotation_action(double phi, const GridFunction& f, const ThetaContext& ctx) {
  if (!std::isfinite(phi)) throw DomainError("rotation: phi must be finite");
  long k = 0;
  bool exact = false;
  if (near_multiple_of_pi(phi, k, exact)) {
    if (!exact) throw DomainError("rotation: phi is within 1e-6 of a multiple of pi; the kernel is ill-conditioned");
    if (k % 2 == 0) return f;
    return apply_dilation(f, -RMatrix::Identity(f.n(), f.n()));
  }
  const double s = std::sin(phi), c = std::cos(phi);
  const RMatrix chirp = (c / s) * RMatrix::Identity(f.n(), f.n());
  GridFunction r = apply_chirp(f, chirp);
  r = apply_sigma(r, ctx);
  r = apply_dilation(r, (1.0 / s) * RMatrix::Identity(f.n(), f.n()));
  return apply_chirp(r, chirp);
}

GridFunction weil_sl2_action(const SL2Coord& c, const GridFunction& f, const ThetaContext& ctx) {
  const double u = c.tau.real(), v = c.tau.imag();
  if (!(v > 0.0)) throw DomainError("weil_sl2_action: Im tau must be positive");
  GridFunction r = rotation_action(c.phi, f, ctx);
  r = apply_dilation(r, std::sqrt(v) * RMatrix::Identity(f.n(), f.n()));
  return apply_chirp(r, u * RMatrix::Identity(f.n(), f.n()));
}

// ---- SL(2, R) ----

namespace {

void require_sl2(const RMatrix& g, const char* what) {
  if (g.rows() != 2 || g.cols() != 2) throw DimensionError(std::string(what) + ": need a 2 x 2 matrix");
  if (std::abs(g.determinant() - 1.0) > 1e-10) throw DomainError(std::string(what) + ": determinant must be 1");
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

double wrap_2pi(double phi) {
  double r = std::fmod(phi, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

}  // namespace

cplx weil_cocycle(const RMatrix& m1, const RMatrix& m2, int m, int n) {
  require_sl2(m1, "cocycle");
  require_sl2(m2, "cocycle");
  const RMatrix m3 = m1 * m2;
  const int s = sgn(m1(1, 0)) * sgn(m2(1, 0)) * sgn(m3(1, 0));
  if (s == 0) return 1.0;
  return std::exp(-kI * kPi * static_cast<double>(m * n * s) / 4.0);
}

Iwasawa iwasawa(const RMatrix& g) {
  require_sl2(g, "iwasawa");
  const double a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  Iwasawa r;
  r.v = 1.0 / (c * c + d * d);
  r.u = (a * c + b * d) * r.v;
  r.phi = wrap_2pi(std::atan2(c, d));
  return r;
}

RMatrix iwasawa_matrix(const Iwasawa& c) {
  if (!(c.v > 0.0)) throw DomainError("iwasawa_matrix: v must be positive");
  RMatrix nn(2, 2), aa(2, 2), kk(2, 2);
  nn << 1.0, c.u, 0.0, 1.0;
  aa << std::sqrt(c.v), 0.0, 0.0, 1.0 / std::sqrt(c.v);
  kk << std::cos(c.phi), -std::sin(c.phi), std::sin(c.phi), std::cos(c.phi);
  return nn * aa * kk;
}

Iwasawa iwasawa_compose(const Iwasawa& g1, const Iwasawa& g2) {
  const double s1 = std::sin(g1.phi), c1 = std::cos(g1.phi);
  const double s2 = std::sin(g2.phi), c2 = std::cos(g2.phi);
  const double lin = g2.u * s1 + c1;
  const double den = lin * lin + (g2.v * s1) * (g2.v * s1);
  const double a = g1.u * lin * lin + (g1.u * g2.v * g2.v - g1.v * g2.u) * s1 * s1 + g1.v * g2.u * c1 * c1 +
                   g1.v * (g2.u * g2.u + g2.v * g2.v - 1.0) * s1 * c1;
  Iwasawa r;
  r.u = a / den;
  r.v = g1.v * g2.v / den;
  const double num = (g2.v * c2 + g2.u * s2) * s1 + s2 * c1;
  const double dd = (-g2.v * s2 + g2.u * c2) * s1 + c2 * c1;
  r.phi = wrap_2pi(std::atan2(num, dd));
  return r;
}

SL2Coord sl2_act(const RMatrix& g, const SL2Coord& c) {
  require_sl2(g, "sl2_act");
  if (!(c.tau.imag() > 0.0)) throw DomainError("sl2_act: Im tau must be positive");
  const cplx j = g(1, 0) * c.tau + g(1, 1);
  SL2Coord r;
  r.tau = (g(0, 0) * c.tau + g(0, 1)) / j;
  r.phi = wrap_2pi(c.phi + std::arg(j));
  return r;
}

SymplecticElement sl2_embed(const RMatrix& g, int n) {
  require_sl2(g, "sl2_embed");
  const CMatrix id = identity(n);
  return SymplecticElement::from_blocks(g(0, 0) * id, g(0, 1) * id, g(1, 0) * id, g(1, 1) * id);
}

cplx jacobi1_factor(const SL2Coord& c, int m, int n) {
  const int s = sgn(std::sin(c.phi)) * sgn(std::sin(c.phi + std::arg(c.tau)));
  return std::exp(-kI * kPi * static_cast<double>(m * n * s) / 4.0);
}

// ---- theta sums ----

namespace {

ThetaResult theta_core(const GridFunction& f, const ThetaContext& ctx, const SL2Coord& c, const RMatrix& lam,
                       const RMatrix& mu) {
  const int m = ctx.m(), n = ctx.n;
  if (f.m() != m || f.n() != n) throw DimensionError("theta_sum: function shape does not match context");
  if ((f.metric() - ctx.m_mat).cwiseAbs().maxCoeff() > 0.0) throw DomainError("theta_sum: function metric differs from M");
  if (lam.rows() != m || lam.cols() != n || mu.rows() != m || mu.cols() != n)
    throw DimensionError("theta_sum: lambda and mu must be m x n");
  const double u = c.tau.real(), v = c.tau.imag();
  if (!(v > 0.0)) throw DomainError("theta_sum: Im tau must be positive");

  const GridFunction fphi = rotation_action(c.phi, f, ctx);
  const Envelope env = fphi.envelope();
  const int d = m * n;
  const double mu_min = min_eig(ctx.m_mat);
  const double pref = std::pow(v, 0.25 * d);

  // Shell k = ||omega||_inf has (2k+1)^d - (2k-1)^d points at M-distance >= r_k from the envelope center.
  double off = 0.0;
  for (int p = 0; p < m; ++p)
    for (int i = 0; i < n; ++i) off = std::max(off, std::abs(lam(p, i) - env.center(p, i) / std::sqrt(v)));
  const double r_peak =
      env.degree == 0 ? 0.0 : 0.5 * (-1.0 + std::sqrt(1.0 + 2.0 * env.degree / (kPi * env.decay)));
  auto e_sup = [&](double r) {
    const double rr = std::max(r, r_peak);
    return env.scale * std::pow(1.0 + rr, env.degree) * std::exp(-kPi * env.decay * rr * rr);
  };
  std::vector<double> shell;
  for (int k = 0;; ++k) {
    const double rk = std::max(0.0, std::sqrt(mu_min * v) * (k - off));
    const double cnt = k == 0 ? 1.0 : std::pow(2.0 * k + 1, d) - std::pow(2.0 * k - 1, d);
    const double term = pref * cnt * e_sup(rk);
    shell.push_back(term);
    if ((rk > r_peak && term < 1e-40 * pref * std::max(env.scale, 1e-300)) || k > 200000) break;
  }
  std::vector<double> tail(shell.size() + 1, 0.0);
  for (std::size_t k = shell.size(); k-- > 0;) tail[k] = tail[k + 1] + shell[k];
  const double target = 1e-12 * pref * std::max(env.scale, 1e-300);
  int ncut = ctx.n_cut;
  if (ncut == 0) {
    ncut = 1;
    while (static_cast<std::size_t>(ncut + 1) < tail.size() && tail[ncut + 1] > target) ++ncut;
  }
  const double tail_bound = static_cast<std::size_t>(ncut + 1) < tail.size() ? tail[ncut + 1] : 0.0;
  if (tail_bound > target) throw AccuracyError("theta_sum: tail bound not met at the requested truncation radius");
  const double points = std::pow(2.0 * ncut + 1, d);
  if (points > 4e6) throw AccuracyError("theta_sum: truncation box exceeds 4e6 lattice points");

  std::vector<cplx> phases, vals;
  phases.reserve(static_cast<std::size_t>(points));
  vals.reserve(static_cast<std::size_t>(points));
  const int per = 2 * ncut + 1;
  std::vector<int> idx(d, 0);
  RMatrix omega(m, n);
  const RMatrix& mm = ctx.m_mat;
  const double sv = std::sqrt(v);
  while (true) {
    for (int a = 0; a < d; ++a) omega(a / n, a % n) = idx[a] - ncut;
    const RMatrix y = omega + lam;
    const double q = (mm * y * y.transpose()).trace();
    const double w = (mm * omega * mu.transpose()).trace();
    phases.push_back(std::exp(kI * kPi * (u * q + 2.0 * w)));
    vals.push_back(fphi(sv * y));
    int a = 0;
    while (a < d && ++idx[a] == per) idx[a++] = 0;
    if (a == d) break;
  }
  ThetaResult r;
  r.value = pref * kernels::cdot(phases.data(), vals.data(), phases.size());
  r.n_cut = ncut;
  r.tail_bound = tail_bound;
  r.terms = phases.size();
  return r;
}

}  // namespace

ThetaResult theta_sum(const GridFunction& f, const ThetaContext& ctx, const SL2Coord& c, const HeisenbergElement& h) {
  const RMatrix lam = h.lambda.real(), mu = h.mu.real(), kappa = h.kappa.real();
  ThetaResult r = theta_core(f, ctx, c, lam, mu);
  r.value *= std::exp(kI * kPi * (ctx.m_mat * (kappa + mu * lam.transpose())).trace());
  return r;
}

ThetaResult theta_sum_reduced(const GridFunction& f, const ThetaContext& ctx, const SL2Coord& c, const RMatrix& lambda,
                              const RMatrix& mu) {
  return theta_core(f, ctx, c, lambda, mu);
}

}  // namespace sj
