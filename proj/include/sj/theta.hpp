#pragma once

#include <memory>
#include <vector>

#include "sj/groups.hpp"
#include "sj/jacobiforms.hpp"

namespace sj {

// exp(log_scale - pi sigma(M x A tx) - 2 pi sigma(M x tb)) on R^{(m,n)}, with A complex
// symmetric n x n, Re A > 0, and b complex m x n.
struct GaussianPart {
  CMatrix a;
  CMatrix b;
  cplx log_scale{0.0, 0.0};
};

// |f(x)| <= scale (1 + ||x - center||_M)^degree exp(-pi decay ||x - center||_M^2)
struct Envelope {
  double scale = 0.0;
  int degree = 0;
  double decay = 0.0;
  RMatrix center;
};

struct QuadratureConfig {
  double divergence_tol = 1e-6;  // two-resolution disagreement that raises AccuracyError
  double alias_exponent = 40.0;  // aliased spectrum suppressed to exp(-alias_exponent)
  int max_points_per_axis = 8192;
  bool force = false;            // use quadrature even when the closed form is available
};

struct ThetaContext {
  RMatrix m_mat;  // positive definite symmetric integral m x m
  int n = 1;
  int n_cut = 0;  // 0 picks the radius from the tail bound
  QuadratureConfig quad;

  ThetaContext(const RMatrix& m_mat, int n, int n_cut = 0, const QuadratureConfig& quad = {});
  int m() const { return static_cast<int>(m_mat.rows()); }
};

// A function on R^{(m,n)} of the form P(x) * Gaussian, or a lazily transformed
// result of an oscillatory quadrature. Immutable; copies share state.
class GridFunction {
 public:
  static GridFunction gaussian(const RMatrix& m_mat, int n, cplx a = 1.0);
  static GridFunction product(const RMatrix& m_mat, const Polynomial& p, const GaussianPart& g);

  int m() const;
  int n() const;
  const RMatrix& metric() const;
  cplx operator()(const RMatrix& x) const;

  bool is_product() const;   // P * Gaussian in closed form
  bool is_gaussian() const;  // closed form with constant P
  const Polynomial& polynomial() const;
  const GaussianPart& gaussian_part() const;
  Envelope envelope() const;

  struct Impl;
  explicit GridFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  const std::shared_ptr<const Impl>& impl() const { return impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

// Uniform centered grid [-extent, extent]^{mn} used for residuals.
struct SampleGrid {
  double extent = 2.0;
  double spacing = 0.25;
};
// Grid points; above 20000 points a fixed pseudo-random subset of 2000 box points is used.
std::vector<RMatrix> sample_points(const SampleGrid& grid, int m, int n);

// [W(h) f](x) = e^{pi i sigma(M(kappa + mu t(lambda) + 2 x t(mu)))} f(x + lambda)
GridFunction schrodinger_action(const HeisenbergElement& h, const GridFunction& f);

struct WeilGenerator {
  enum class Kind { heisenberg, t, g, sigma } kind = Kind::t;
  cplx unit{1.0, 0.0};
  HeisenbergElement h;
  RMatrix b;
  RMatrix alpha;

  static WeilGenerator heisenberg(const HeisenbergElement& h, cplx unit = 1.0);
  static WeilGenerator t(const RMatrix& b, cplx unit = 1.0);
  static WeilGenerator g(const RMatrix& alpha, cplx unit = 1.0);
  static WeilGenerator sigma(int n, cplx unit = 1.0);
  // Symplectic part (identity for the Heisenberg generator).
  SymplecticElement symplectic(int n) const;
};

GridFunction weil_generator_action(const WeilGenerator& gen, const GridFunction& f, const ThetaContext& ctx);

// sup over the grid of |R(g) W(h) f - W(g h g^-1) R(g) f|
double stone_von_neumann_check(const WeilGenerator& gen, const HeisenbergElement& h, const GridFunction& f,
                               const ThetaContext& ctx, const SampleGrid& grid = {});

struct SL2Coord {
  cplx tau{0.0, 1.0};
  double phi = 0.0;
};

// R(i, phi); phi within 1e-6 of a multiple of pi (but not on it) raises DomainError.
GridFunction rotation_action(double phi, const GridFunction& f, const ThetaContext& ctx);
// R(tau, phi) = v^{mn/4} e^{pi i u ||x||^2} [R(i, phi) f](v^{1/2} x)
GridFunction weil_sl2_action(const SL2Coord& c, const GridFunction& f, const ThetaContext& ctx);

// e^{-i pi m n sign(c1 c2 c3) / 4} with M3 = M1 M2.
cplx weil_cocycle(const RMatrix& m1, const RMatrix& m2, int m, int n);

struct Iwasawa {
  double u = 0.0;
  double v = 1.0;
  double phi = 0.0;
};
Iwasawa iwasawa(const RMatrix& g);
RMatrix iwasawa_matrix(const Iwasawa& c);
// Closed-form coordinates of g1 g2.
Iwasawa iwasawa_compose(const Iwasawa& g1, const Iwasawa& g2);
// (a tau + b)/(c tau + d), phi + arg(c tau + d) mod 2 pi
SL2Coord sl2_act(const RMatrix& g, const SL2Coord& c);
SymplecticElement sl2_embed(const RMatrix& g, int n);

struct ThetaResult {
  cplx value;
  int n_cut = 0;
  double tail_bound = 0.0;
  std::size_t terms = 0;
};

// Theta_f(tau, phi; lambda, mu, kappa) with prefactor e^{pi i sigma(M(kappa + mu t(lambda)))}.
ThetaResult theta_sum(const GridFunction& f, const ThetaContext& ctx, const SL2Coord& c, const HeisenbergElement& h);
// The kappa-free version Theta_f(tau, phi; lambda, mu).
ThetaResult theta_sum_reduced(const GridFunction& f, const ThetaContext& ctx, const SL2Coord& c,
                              const RMatrix& lambda, const RMatrix& mu);

// Factor in Theta(-1/tau, phi + arg tau; -mu, lambda, kappa) = det(M)^{-n/2} factor Theta(tau, phi; ...).
cplx jacobi1_factor(const SL2Coord& c, int m, int n);

}  // namespace sj
