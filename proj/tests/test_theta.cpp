#include <doctest.h>

#include "sj/theta.hpp"
#include "support.hpp"

using namespace sj;

namespace {

using LD = long double;
using CLD = std::complex<LD>;
constexpr LD kPiL = 3.141592653589793238462643383279502884L;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

RMatrix scalar(double a) { return RMatrix::Constant(1, 1, a); }

RMatrix unimodular2() {
  RMatrix a(2, 2);
  a << 2.0, 1.0, 1.0, 1.0;
  return a;
}

// Random polynomial of degree <= deg times a shifted, chirped Gaussian.
GridFunction rand_poly_gaussian(std::mt19937_64& rng, const RMatrix& mm, int n, int deg) {
  const int m = static_cast<int>(mm.rows());
  Polynomial p = Polynomial::constant(m, n, cplx(1.0 + sjt::uni(rng, 0, 0.5), sjt::uni(rng, -0.3, 0.3)));
  for (int k = 0; k < deg; ++k) {
    Polynomial lin = Polynomial::constant(m, n, cplx(sjt::uni(rng, -0.5, 0.5), sjt::uni(rng, -0.5, 0.5)));
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < n; ++i)
        lin = lin + Polynomial::variable(m, n, a, i) * cplx(sjt::uni(rng, -1, 1), sjt::uni(rng, -1, 1));
    p = p * lin;
  }
  GaussianPart g;
  const CMatrix re = sjt::rand_spd(rng, n);
  g.a = CMatrix(re * (1.0 / re.real().trace() * n) + 0.3 * sjt::rand_sym(rng, n) * kI);
  g.b = sjt::rand_complex(rng, m, n, 0.3);
  return GridFunction::product(mm, p, g);
}

double sup_diff(const GridFunction& a, const GridFunction& b, const SampleGrid& grid = {}) {
  double r = 0.0;
  for (const RMatrix& x : sample_points(grid, a.m(), a.n())) r = std::max(r, std::abs(a(x) - b(x)));
  return r;
}

HeisenbergElement heis(const RMatrix& lam, const RMatrix& mu, const RMatrix& kappa) {
  return HeisenbergElement(lam.cast<cplx>(), mu.cast<cplx>(), kappa.cast<cplx>());
}

HeisenbergElement rand_heis(std::mt19937_64& rng, int m, int n, double s = 1.0) {
  const RMatrix lam = s * sjt::rand_real(rng, m, n).real();
  const RMatrix mu = s * sjt::rand_real(rng, m, n).real();
  const RMatrix sym = s * sjt::rand_sym(rng, m).real();
  return heis(lam, mu, sym - mu * lam.transpose());
}

RMatrix rand_int(std::mt19937_64& rng, int r, int c, int lo, int hi) {
  RMatrix a(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) a(i, k) = static_cast<double>(lo + static_cast<int>(rng() % (hi - lo + 1)));
  return a;
}

RMatrix rand_sl2(std::mt19937_64& rng) {
  const double a = sjt::uni(rng, -2, 2), b = sjt::uni(rng, -2, 2), c = sjt::uni(rng, -2, 2);
  RMatrix g(2, 2);
  if (std::abs(a) < 0.2) return rand_sl2(rng);
  g << a, b, c, (1.0 + b * c) / a;
  return g;
}

// phi away from multiples of pi
double rand_phi(std::mt19937_64& rng) {
  while (true) {
    const double p = sjt::uni(rng, 0.0, 2.0 * 3.141592653589793);
    if (std::abs(std::sin(p)) > 0.2) return p;
  }
}

}  // namespace

TEST_CASE("weil generators: closed-form examples") {
  std::mt19937_64 rng(11);
  const RMatrix mm = scalar(1.0);
  ThetaContext ctx(mm, 1);
  const GridFunction f = rand_poly_gaussian(rng, mm, 1, 2);

  const GridFunction g2 = weil_generator_action(WeilGenerator::g(scalar(2.0)), f, ctx);
  for (double x : {-1.3, -0.2, 0.0, 0.7, 1.9})
    CHECK(std::abs(g2(scalar(x)) - std::sqrt(2.0) * f(scalar(2.0 * x))) < 1e-13);

  const GridFunction t0 = weil_generator_action(WeilGenerator::t(scalar(0.0)), f, ctx);
  CHECK(sup_diff(t0, f) == 0.0);

  const GridFunction t1 = weil_generator_action(WeilGenerator::t(scalar(0.7), std::exp(kI * 0.3)), f, ctx);
  for (double x : {-0.8, 0.4})
    CHECK(std::abs(t1(scalar(x)) - std::exp(kI * 0.3) * std::exp(kI * kPi * 0.7 * x * x) * f(scalar(x))) < 1e-13);

  // Gaussian self-duality, closed form and by quadrature
  const GridFunction gau = GridFunction::gaussian(mm, 1);
  QuadratureConfig q;
  q.force = true;
  ThetaContext qctx(mm, 1, 0, q);
  const GridFunction s_exact = weil_generator_action(WeilGenerator::sigma(1), gau, ctx);
  const GridFunction s_quad = weil_generator_action(WeilGenerator::sigma(1), gau, qctx);
  CHECK(s_exact.is_gaussian());
  CHECK_FALSE(s_quad.is_product());
  CHECK(sup_diff(s_exact, gau) < 1e-14);
  CHECK(sup_diff(s_quad, gau) < 1e-8);

  // m = 2, n = 1 with a non-diagonal metric: the M-Gaussian is still self-dual
  const RMatrix m2 = unimodular2();
  ThetaContext qctx2(m2, 1, 0, q);
  const GridFunction gau2 = GridFunction::gaussian(m2, 1);
  CHECK(sup_diff(weil_generator_action(WeilGenerator::sigma(1), gau2, qctx2), gau2, {1.0, 0.25}) < 1e-8);
  // det M = 2: factor (det M)^{n/2} appears through the M-normalized measure
  RMatrix m3(2, 2);
  m3 << 2.0, 0.0, 0.0, 1.0;
  ThetaContext qctx3(m3, 1, 0, q);
  const GridFunction gau3 = GridFunction::gaussian(m3, 1);
  CHECK(sup_diff(weil_generator_action(WeilGenerator::sigma(1), gau3, qctx3), gau3, {1.0, 0.25}) < 1e-8);
}

TEST_CASE("schrodinger action: examples and representation property") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 1 + trial % 2, n = 1 + (trial / 2) % 2;
    const RMatrix mm = m == 1 ? scalar(1.0 + trial % 3) : unimodular2();
    const GridFunction f = rand_poly_gaussian(rng, mm, n, trial % 3);
    const SampleGrid grid{1.0, 0.5};

    const RMatrix kap = sjt::rand_sym(rng, m).real();
    const GridFunction fk = schrodinger_action(heis(RMatrix::Zero(m, n), RMatrix::Zero(m, n), kap), f);
    const cplx ph = std::exp(kI * kPi * (mm * kap).trace());
    for (const RMatrix& x : sample_points(grid, m, n)) CHECK(std::abs(fk(x) - ph * f(x)) < 1e-12);

    const RMatrix l0 = sjt::rand_real(rng, m, n).real();
    const GridFunction fs = schrodinger_action(heis(l0, RMatrix::Zero(m, n), RMatrix::Zero(m, m)), f);
    for (const RMatrix& x : sample_points(grid, m, n)) CHECK(std::abs(fs(x) - f(x + l0)) < 1e-12);

    const HeisenbergElement h1 = rand_heis(rng, m, n), h2 = rand_heis(rng, m, n);
    const GridFunction lhs = schrodinger_action(heisenberg_multiply(h1, h2), f);
    const GridFunction rhs = schrodinger_action(h1, schrodinger_action(h2, f));
    for (const RMatrix& x : sample_points(grid, m, n)) CHECK(rel(lhs(x), rhs(x)) < 1e-10);
  }
}

TEST_CASE("weil generators compose as a projective representation on Gaussians") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 2;
    const RMatrix mm = scalar(1.0 + trial % 2);
    ThetaContext ctx(mm, n);
    const GridFunction f = rand_poly_gaussian(rng, mm, n, 0);
    const RMatrix b1 = sjt::rand_sym(rng, n).real(), b2 = sjt::rand_sym(rng, n).real();
    const GridFunction tt = weil_generator_action(WeilGenerator::t(b1), weil_generator_action(WeilGenerator::t(b2), f, ctx), ctx);
    CHECK(sup_diff(tt, weil_generator_action(WeilGenerator::t(b1 + b2), f, ctx), {1.0, 0.5}) < 1e-12);
    RMatrix a1 = sjt::rand_real(rng, n, n).real() + 2.0 * RMatrix::Identity(n, n);
    RMatrix a2 = sjt::rand_real(rng, n, n).real() + 2.0 * RMatrix::Identity(n, n);
    // g(a1) after g(a2) is f(x t(a2 a1))
    const GridFunction gg = weil_generator_action(WeilGenerator::g(a1), weil_generator_action(WeilGenerator::g(a2), f, ctx), ctx);
    CHECK(sup_diff(gg, weil_generator_action(WeilGenerator::g(a2 * a1), f, ctx), {1.0, 0.5}) < 1e-11);
    // sigma^2 is the parity map
    const GridFunction ss = weil_generator_action(WeilGenerator::sigma(n), weil_generator_action(WeilGenerator::sigma(n), f, ctx), ctx);
    for (const RMatrix& x : sample_points({1.0, 0.5}, 1, n)) CHECK(rel(ss(x), f(-x)) < 1e-11);
  }
}

TEST_CASE("stone-von neumann relation on every generator") {
  std::mt19937_64 rng(14);
  QuadratureConfig q;
  q.force = true;
  double worst_exact = 0.0, worst_quad = 0.0;
  for (int trial = 0; trial < 16; ++trial) {
    const int m = 1 + trial % 2, n = (m == 2) ? 1 : 1 + (trial / 2) % 2;
    const RMatrix mm = m == 1 ? scalar(1.0 + trial % 2) : unimodular2();
    ThetaContext ctx(mm, n), qctx(mm, n, 0, q);
    const GridFunction f = rand_poly_gaussian(rng, mm, n, trial % 3);
    const GridFunction fg = rand_poly_gaussian(rng, mm, n, 0);
    const HeisenbergElement h = rand_heis(rng, m, n, 0.6);
    const SampleGrid grid{1.0, 0.25};

    CHECK(stone_von_neumann_check(WeilGenerator::t(RMatrix::Zero(n, n)), h, f, ctx, grid) == doctest::Approx(0.0));
    const std::vector<WeilGenerator> gens = {
        WeilGenerator::heisenberg(rand_heis(rng, m, n)), WeilGenerator::t(sjt::rand_sym(rng, n).real()),
        WeilGenerator::g(sjt::rand_real(rng, n, n).real() + 2.0 * RMatrix::Identity(n, n), std::exp(kI * 0.4)),
        WeilGenerator::sigma(n)};
    for (const auto& g : gens) {
      worst_exact = std::max(worst_exact, stone_von_neumann_check(g, h, fg, ctx, grid));
      worst_quad = std::max(worst_quad, stone_von_neumann_check(g, h, f, qctx, grid));
    }
  }
  MESSAGE("stone-von neumann: closed form " << worst_exact << ", quadrature " << worst_quad);
  CHECK(worst_exact < 1e-10);
  CHECK(worst_quad < 1e-6);

  // worked examples: shift under g(alpha), and (0, mu; 0) under sigma by quadrature
  const RMatrix mm = scalar(1.0);
  ThetaContext ctx(mm, 1), qctx(mm, 1, 0, q);
  const GridFunction gau = GridFunction::gaussian(mm, 1);
  CHECK(stone_von_neumann_check(WeilGenerator::g(scalar(1.7)), heis(scalar(0.4), scalar(0.0), scalar(0.0)), gau, ctx) < 1e-8);
  CHECK(stone_von_neumann_check(WeilGenerator::sigma(1), heis(scalar(0.0), scalar(0.8), scalar(0.0)), gau, qctx) < 1e-6);
}

TEST_CASE("rotation kernel: special angles and errors") {
  std::mt19937_64 rng(15);
  const RMatrix mm = scalar(1.0);
  ThetaContext ctx(mm, 1);
  const GridFunction f = rand_poly_gaussian(rng, mm, 1, 2);
  CHECK(sup_diff(rotation_action(0.0, f, ctx), f) == 0.0);
  CHECK(sup_diff(weil_sl2_action({kI, 0.0}, f, ctx), f) < 1e-15);
  const GridFunction par = rotation_action(kPi, f, ctx);
  for (double x : {-1.0, 0.3, 1.5}) CHECK(std::abs(par(scalar(x)) - f(scalar(-x))) < 1e-14);
  CHECK(sup_diff(rotation_action(2.0 * kPi, f, ctx), f) == 0.0);
  CHECK_THROWS_AS(rotation_action(kPi + 1e-8, f, ctx), DomainError);
  CHECK_THROWS_AS(rotation_action(-3e-7, f, ctx), DomainError);

  // Gaussian: R(i, phi) e^{-pi x^2} = e^{i pi / 4} e^{-i phi / 2} e^{-pi x^2} for 0 < phi < pi
  const GridFunction gau = GridFunction::gaussian(mm, 1);
  for (double phi : {0.3, 1.1, 2.9}) {
    const GridFunction r = rotation_action(phi, gau, ctx);
    const cplx z = std::exp(kI * (kPi / 4.0 - phi / 2.0));
    for (double x : {-0.9, 0.0, 0.6}) CHECK(std::abs(r(scalar(x)) - z * gau(scalar(x))) < 1e-14);
  }

  // mn > 2 needs the closed form
  const GridFunction f3 = rand_poly_gaussian(rng, scalar(1.0), 3, 1);
  ThetaContext ctx3(scalar(1.0), 3);
  CHECK_THROWS_AS(rotation_action(1.0, f3, ctx3), DomainError);
  CHECK_NOTHROW(rotation_action(1.0, rand_poly_gaussian(rng, scalar(1.0), 3, 0), ctx3));
  // no nested oscillatory transforms of quadrature output
  const GridFunction once = rotation_action(1.0, f, ctx);
  CHECK_THROWS_AS(rotation_action(1.0, once, ctx), DomainError);
  CHECK_THROWS_AS(sample_points({1.0, 0.3}, 1, 1), ParameterError);
}

TEST_CASE("rotation by pi/2 equals the Fourier transform (independent Riemann sum)") {
  std::mt19937_64 rng(16);
  const RMatrix mm = scalar(1.0);
  ThetaContext ctx(mm, 1);
  for (int trial = 0; trial < 4; ++trial) {
    const GridFunction f = rand_poly_gaussian(rng, mm, 1, 1 + trial % 3);
    const GridFunction r = rotation_action(kPi / 2.0, f, ctx);
    for (double x : {-1.2, -0.1, 0.5, 1.4}) {
      CLD acc = 0.0L;
      const LD h = 0.005L;
      for (int j = -3000; j <= 3000; ++j) {
        const LD y = j * h;
        const cplx fy = f(scalar(static_cast<double>(y)));
        acc += CLD(fy.real(), fy.imag()) * std::exp(CLD(0.0L, -2.0L * kPiL * y * static_cast<LD>(x)));
      }
      acc *= h;
      CHECK(std::abs(r(scalar(x)) - cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()))) < 1e-6);
    }
  }
}

TEST_CASE("cocycle: examples and the projective composition law") {
  RMatrix s(2, 2), l(2, 2), up(2, 2);
  s << 0.0, -1.0, 1.0, 0.0;
  l << 1.0, 0.0, 1.0, 1.0;
  up << 1.0, 3.0, 0.0, 1.0;
  CHECK(std::abs(weil_cocycle(up, s, 1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(weil_cocycle(s, s, 1, 1) - 1.0) < 1e-15);
  for (int mn : {1, 2, 3})
    CHECK(std::abs(weil_cocycle(s, l, mn, 1) - std::exp(-kI * kPi * static_cast<double>(mn) / 4.0)) < 1e-15);
  RMatrix bad(2, 2);
  bad << 1.0, 1.0, 0.0, 2.0;
  CHECK_THROWS_AS(weil_cocycle(bad, s, 1, 1), DomainError);

  // R(g1 g2) = c(g1, g2) R(g1) R(g2) on Gaussians, with R(g) = R(tau, phi) for g = N(u) A(v) K(phi)
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int m = trial % 3 == 2 ? 2 : 1, n = trial % 3 == 1 ? 2 : 1;
    const RMatrix mm = m == 2 ? unimodular2() : scalar(1.0 + trial % 2);
    ThetaContext ctx(mm, n);
    const GridFunction f = rand_poly_gaussian(rng, mm, n, 0);
    const RMatrix g1 = rand_sl2(rng), g2 = rand_sl2(rng);
    auto r_of = [&](const RMatrix& g, const GridFunction& h) {
      const Iwasawa c = iwasawa(g);
      return weil_sl2_action({cplx(c.u, c.v), c.phi}, h, ctx);
    };
    const GridFunction lhs = r_of(g1 * g2, f);
    const GridFunction rhs = r_of(g1, r_of(g2, f));
    const cplx c = weil_cocycle(g1, g2, m, n);
    for (const RMatrix& x : sample_points({1.0, 0.5}, m, n)) worst = std::max(worst, rel(lhs(x), c * rhs(x)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("iwasawa coordinates and composition") {
  RMatrix d(2, 2), s(2, 2);
  d << 2.0, 0.0, 0.0, 0.5;
  s << 0.0, -1.0, 1.0, 0.0;
  const Iwasawa cd = iwasawa(d);
  CHECK(cd.u == doctest::Approx(0.0));
  CHECK(cd.v == doctest::Approx(4.0));
  CHECK(cd.phi == doctest::Approx(0.0));
  const Iwasawa cs = iwasawa(s);
  CHECK(cs.u == doctest::Approx(0.0));
  CHECK(cs.v == doctest::Approx(1.0));
  CHECK(cs.phi == doctest::Approx(kPi / 2.0));

  std::mt19937_64 rng(18);
  double round = 0.0, comp = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const RMatrix g1 = rand_sl2(rng), g2 = rand_sl2(rng);
    const Iwasawa c1 = iwasawa(g1), c2 = iwasawa(g2);
    CHECK(c1.v > 0.0);
    CHECK(c1.phi >= 0.0);
    CHECK(c1.phi < 2.0 * kPi);
    round = std::max(round, (iwasawa_matrix(c1) - g1).cwiseAbs().maxCoeff());
    const Iwasawa c3 = iwasawa_compose(c1, c2);
    const Iwasawa direct = iwasawa(g1 * g2);
    comp = std::max({comp, std::abs(c3.u - direct.u), std::abs(c3.v - direct.v)});
    comp = std::max(comp, (iwasawa_matrix(c3) - g1 * g2).cwiseAbs().maxCoeff());
    // phi compared through tan and through the reassembled matrix
    comp = std::max(comp, std::abs(std::sin(c3.phi - direct.phi)));
  }
  CHECK(round < 1e-12);
  CHECK(comp < 1e-10);

  // identity second factor, and phi1 = 0 (upper triangular first factor)
  const Iwasawa a{0.3, 1.7, 2.2};
  const Iwasawa ai = iwasawa_compose(a, Iwasawa{0.0, 1.0, 0.0});
  CHECK(ai.u == doctest::Approx(a.u));
  CHECK(ai.v == doctest::Approx(a.v));
  CHECK(ai.phi == doctest::Approx(a.phi));
  const Iwasawa b{-0.4, 0.6, 0.0}, c{1.1, 2.5, 0.9};
  const Iwasawa bc = iwasawa_compose(b, c);
  CHECK(bc.v == doctest::Approx(b.v * c.v));
  CHECK(bc.u == doctest::Approx(b.u + b.v * c.u));
  CHECK(bc.phi == doctest::Approx(c.phi));

  // sl2_act agrees with the Iwasawa coordinates of the product
  for (int trial = 0; trial < 50; ++trial) {
    const RMatrix g1 = rand_sl2(rng), g2 = rand_sl2(rng);
    const Iwasawa c2 = iwasawa(g2);
    const SL2Coord r = sl2_act(g1, {cplx(c2.u, c2.v), c2.phi});
    const Iwasawa c3 = iwasawa(g1 * g2);
    CHECK(std::abs(r.tau - cplx(c3.u, c3.v)) < 1e-10);
    CHECK(std::abs(std::sin(r.phi - c3.phi)) + std::abs(std::cos(r.phi - c3.phi) - 1.0) < 1e-10);
  }
  const SymplecticElement e = sl2_embed(s, 2);
  CHECK(sjt::diff(e.mat, SymplecticElement::sigma(2).mat) < 1e-15);
}

TEST_CASE("theta sum: lattice example, kappa shift, truncation errors") {
  const RMatrix mm = scalar(1.0);
  ThetaContext ctx(mm, 1);
  const GridFunction gau = GridFunction::gaussian(mm, 1);
  const HeisenbergElement zero = HeisenbergElement::identity(1, 1);
  const ThetaResult r = theta_sum(gau, ctx, {kI, 0.0}, zero);
  LD oracle = 0.0L;
  for (int w = -8; w <= 8; ++w) oracle += std::exp(-kPiL * w * w);
  CHECK(std::abs(r.value - cplx(static_cast<double>(oracle), 0.0)) < 1e-10);
  CHECK(r.value.real() == doctest::Approx(1.0864348112133080).epsilon(1e-12));
  CHECK(r.tail_bound < 1e-12);

  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const HeisenbergElement h = rand_heis(rng, 1, 1);
    const RMatrix k0 = sjt::rand_sym(rng, 1).real();
    const HeisenbergElement hk(h.lambda, h.mu, h.kappa + k0.cast<cplx>());
    const SL2Coord c{cplx(0.3, 0.8), 0.0};
    const cplx a = theta_sum(gau, ctx, c, h).value, b = theta_sum(gau, ctx, c, hk).value;
    CHECK(std::abs(b - std::exp(kI * kPi * (mm * k0).trace()) * a) < 1e-12);
  }

  ThetaContext tight(mm, 1, 1);
  CHECK_THROWS_AS(theta_sum(gau, tight, {kI, 0.0}, zero), AccuracyError);
  CHECK_THROWS_AS(ThetaContext(scalar(1.5), 1), DomainError);
  CHECK_THROWS_AS(ThetaContext(scalar(-1.0), 1), DomainError);
  CHECK_THROWS_AS(ThetaContext(mm, 1, -2), ParameterError);
}

TEST_CASE("theta: Jacobi 2 and Jacobi 3 on random draws") {
  std::mt19937_64 rng(20);
  double worst2 = 0.0, worst3 = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const RMatrix mm = scalar(1.0 + trial % 2);
    ThetaContext ctx(mm, 1);
    const GridFunction f = rand_poly_gaussian(rng, mm, 1, trial % 3);
    const SL2Coord c{cplx(sjt::uni(rng, -1, 1), sjt::uni(rng, 0.6, 1.5)), trial % 4 == 0 ? 0.0 : rand_phi(rng)};
    const HeisenbergElement h = rand_heis(rng, 1, 1);
    const RMatrix lam = h.lambda.real(), mu = h.mu.real(), kap = h.kappa.real();
    const cplx base = theta_sum(f, ctx, c, h).value;

    const RMatrix s = rand_int(rng, 1, 1, -3, 3);
    const HeisenbergElement h2 = heis(lam, s - 2.0 * lam + mu, kap - s * lam.transpose());
    const cplx v2 = theta_sum(f, ctx, {c.tau + 2.0, c.phi}, h2).value;
    worst2 = std::max(worst2, rel(v2, base));

    const RMatrix l0 = rand_int(rng, 1, 1, -2, 2), m0 = rand_int(rng, 1, 1, -2, 2), k0 = rand_int(rng, 1, 1, -2, 2);
    const HeisenbergElement h3 =
        heis(lam + l0, mu + m0, kap + k0 + l0 * mu.transpose() - m0 * lam.transpose());
    const cplx v3 = theta_sum(f, ctx, c, h3).value;
    const cplx factor = std::exp(kI * kPi * (mm * (k0 + m0 * l0.transpose())).trace());
    worst3 = std::max(worst3, rel(v3, factor * base));
  }
  MESSAGE("jacobi 2: " << worst2 << ", jacobi 3: " << worst3);
  CHECK(worst2 < 1e-8);
  CHECK(worst3 < 1e-8);
}

TEST_CASE("theta: Jacobi 1 with unimodular M") {
  std::mt19937_64 rng(21);
  double worst = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    const bool big = trial % 3 == 2;
    const RMatrix mm = big ? unimodular2() : scalar(1.0);
    const int m = big ? 2 : 1;
    ThetaContext ctx(mm, 1);
    const GridFunction f = rand_poly_gaussian(rng, mm, 1, trial % 3 == 1 ? 2 : 0);
    SL2Coord c;
    while (true) {
      c = {cplx(sjt::uni(rng, -1, 1), sjt::uni(rng, 0.6, 1.5)), rand_phi(rng)};
      if (std::abs(std::sin(c.phi + std::arg(c.tau))) > 0.2) break;
    }
    const HeisenbergElement h = rand_heis(rng, m, 1);
    const cplx base = theta_sum(f, ctx, c, h).value;
    const SL2Coord cs{-1.0 / c.tau, c.phi + std::arg(c.tau)};
    const cplx lhs = theta_sum(f, ctx, cs, HeisenbergElement(-h.mu, h.lambda, h.kappa)).value;
    const cplx rhs = std::pow(mm.determinant(), -0.5) * jacobi1_factor(c, m, 1) * base;
    worst = std::max(worst, rel(lhs, rhs));
  }
  MESSAGE("jacobi 1: " << worst);
  CHECK(worst < 1e-3);
}

TEST_CASE("theta: product invariance under the generators of the level-2 Jacobi group") {
  std::mt19937_64 rng(22);
  double worst_s = 0.0, worst_other = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    const bool big = trial % 4 == 3;
    const RMatrix mm = big ? unimodular2() : scalar(1.0);
    const int m = big ? 2 : 1;
    ThetaContext ctx(mm, 1);
    const GridFunction f = rand_poly_gaussian(rng, mm, 1, trial % 2);
    const GridFunction g = rand_poly_gaussian(rng, mm, 1, 0);
    SL2Coord c;
    while (true) {
      c = {cplx(sjt::uni(rng, -1, 1), sjt::uni(rng, 0.6, 1.5)), rand_phi(rng)};
      if (std::abs(std::sin(c.phi + std::arg(c.tau))) > 0.2) break;
    }
    const RMatrix lam = sjt::rand_real(rng, m, 1).real(), mu = sjt::rand_real(rng, m, 1).real();
    auto prod = [&](const SL2Coord& cc, const RMatrix& l, const RMatrix& u) {
      return theta_sum_reduced(f, ctx, cc, l, u).value * std::conj(theta_sum_reduced(g, ctx, cc, l, u).value);
    };
    const cplx base = prod(c, lam, mu);

    RMatrix s(2, 2), t2(2, 2);
    s << 0.0, -1.0, 1.0, 0.0;
    t2 << 1.0, 2.0, 0.0, 1.0;
    // (gamma, (l0, m0)) maps (g; l, u) to (gamma g; (l0, m0) + (l, u) gamma^-1)
    const cplx vs = prod(sl2_act(s, c), -mu, lam);
    worst_s = std::max(worst_s, std::abs(vs - base) / std::abs(base));
    CHECK(std::abs(std::abs(vs) - std::abs(base)) / std::abs(base) < 1e-3);

    const RMatrix sh = rand_int(rng, m, 1, -2, 2);
    const cplx vt = prod(sl2_act(t2, c), lam, sh - 2.0 * lam + mu);
    const RMatrix l0 = rand_int(rng, m, 1, -2, 2), m0 = rand_int(rng, m, 1, -2, 2);
    const cplx vh = prod(c, lam + l0, mu + m0);
    worst_other = std::max({worst_other, std::abs(vt - base) / std::abs(base), std::abs(vh - base) / std::abs(base)});
  }
  MESSAGE("level-2 invariance: S " << worst_s << ", others " << worst_other);
  CHECK(worst_s < 1e-3);
  CHECK(worst_other < 1e-8);
}
