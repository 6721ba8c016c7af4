#include <doctest.h>

#include "sj/reduction.hpp"
#include "support.hpp"

using namespace sj;

namespace {

// Classical reduction into |x| <= 1/2, |w| >= 1 in extended precision.
std::complex<long double> sl2z_reduce(std::complex<long double> w) {
  for (int it = 0; it < 10000; ++it) {
    w -= std::round(w.real());
    if (std::norm(w) < 1.0L)
      w = -1.0L / w;
    else
      break;
  }
  return w;
}

bool is_unimodular(const RMatrix& u) {
  return (u - u.array().round().matrix()).cwiseAbs().maxCoeff() == 0.0 && std::abs(std::abs(u.determinant()) - 1.0) < 1e-9;
}

RMatrix rand_pd(std::mt19937_64& rng, int n) { return sjt::rand_spd(rng, n).real(); }

// Random element of Sp(n, Z) as a word in integral translations, permutations and sigma_n.
SymplecticElement random_integral(std::mt19937_64& rng, int n, int length) {
  SymplecticElement g = SymplecticElement::identity(n);
  for (int s = 0; s < length; ++s) {
    int kind = static_cast<int>(rng() % 3);
    if (kind == 0) {
      RMatrix b = RMatrix::Zero(n, n);
      int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
      b(i, j) = b(j, i) = static_cast<double>(static_cast<int>(rng() % 5) - 2);
      g = multiply(SymplecticElement::t(b.cast<cplx>()), g);
    } else if (kind == 1) {
      RMatrix a = RMatrix::Identity(n, n);
      int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
      if (i != j) a(i, j) = static_cast<double>(static_cast<int>(rng() % 3) - 1);
      g = multiply(SymplecticElement::g(a.cast<cplx>()), g);
    } else {
      g = multiply(SymplecticElement::sigma(n), g);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("minkowski reduction of reduced input is trivial") {
  for (int n = 1; n <= 3; ++n) {
    MinkowskiResult r = minkowski_reduce(RMatrix::Identity(n, n));
    CHECK(r.u.isIdentity());
    CHECK(r.reduced.isIdentity());
  }
  CHECK_THROWS_AS(minkowski_reduce(RMatrix::Identity(4, 4)), ParameterError);
  CHECK(minkowski_reduce(RMatrix::Identity(4, 4), true).u.isIdentity());
  CHECK_THROWS_AS(minkowski_reduce(-RMatrix::Identity(2, 2)), DomainError);
}

TEST_CASE("minkowski reduction matches exhaustive search for a skewed form") {
  RMatrix y(2, 2);
  y << 1.0, 0.9, 0.9, 1.0;
  MinkowskiResult r = minkowski_reduce(y);
  // brute force over unimodular U with entries in [-3, 3]: lexicographic min of (y11, y22) with y12 >= 0
  double b11 = 1e9, b22 = 1e9, b12 = 0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
        for (int d = -3; d <= 3; ++d) {
          if (std::abs(a * d - b * c) != 1) continue;
          RMatrix u(2, 2);
          u << a, b, c, d;
          RMatrix z = u * y * u.transpose();
          if (z(0, 1) < 0) continue;
          if (z(0, 0) < b11 - 1e-12 || (std::abs(z(0, 0) - b11) <= 1e-12 && z(1, 1) < b22 - 1e-12)) {
            b11 = z(0, 0);
            b22 = z(1, 1);
            b12 = z(0, 1);
          }
        }
  CHECK(std::abs(r.reduced(0, 0) - b11) < 1e-12);
  CHECK(std::abs(r.reduced(1, 1) - b22) < 1e-12);
  CHECK(std::abs(r.reduced(0, 1) - b12) < 1e-12);
  CHECK(std::abs(b11 - 0.2) < 1e-12);
  CHECK(is_unimodular(r.u));
  CHECK((r.u * y * r.u.transpose() - r.reduced).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("minkowski reduction on random forms") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 60; ++k) {
    int n = 2 + k % 2;
    RMatrix y = rand_pd(rng, n);
    // skew it with a random unimodular matrix
    RMatrix u0 = RMatrix::Identity(n, n);
    for (int s = 0; s < 4; ++s) {
      int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
      if (i != j) u0.row(i) += static_cast<double>(static_cast<int>(rng() % 5) - 2) * u0.row(j);
    }
    RMatrix yy = u0 * y * u0.transpose();
    MinkowskiResult r = minkowski_reduce(yy);
    CHECK(is_unimodular(r.u));
    CHECK(minkowski_violations(r.reduced) == 0);
    CHECK(minkowski_m2(r.reduced));
    CHECK(std::abs(r.reduced.determinant() - yy.determinant()) < 1e-9 * yy.determinant());
    CHECK((r.u * yy * r.u.transpose() - r.reduced).cwiseAbs().maxCoeff() < 1e-9 * yy.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("siegel reduction for n = 1 agrees with the classical algorithm") {
  SiegelReduction ex = siegel_reduce(SiegelPoint(CMatrix::Constant(1, 1, cplx(0.7, 0.3))));
  std::complex<long double> o = sl2z_reduce({0.7L, 0.3L});
  CHECK(std::abs(ex.point.omega(0, 0) - cplx(static_cast<double>(o.real()), static_cast<double>(o.imag()))) < 1e-12);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    cplx w(sjt::uni(rng, -5, 5), std::exp(sjt::uni(rng, -5, 1)));
    SiegelPoint p(CMatrix::Constant(1, 1, w));
    SiegelReduction r = siegel_reduce(p);
    cplx x = r.point.omega(0, 0);
    CHECK(std::abs(x.real()) <= 0.5);
    CHECK(std::norm(x) >= 1.0);
    std::complex<long double> e = sl2z_reduce({w.real(), w.imag()});
    CHECK(std::abs(x - cplx(static_cast<double>(e.real()), static_cast<double>(e.imag()))) < 1e-9);
    CHECK(verify_certificate(p, r) < 1e-9);
    CHECK(r.cert.s1);
    CHECK(r.cert.s3);
  }
}

TEST_CASE("siegel reduction for n = 2, 3") {
  for (int n = 1; n <= 3; ++n) {
    SiegelReduction r = siegel_reduce(SiegelPoint(CMatrix(kI * CMatrix::Identity(n, n))));
    CHECK(r.cert.gamma.mat.isApprox(CMatrix::Identity(2 * n, 2 * n)));
    CHECK(max_abs(r.point.omega - kI * CMatrix::Identity(n, n)) == 0.0);
  }
  std::mt19937_64 rng(10);
  for (int k = 0; k < 40; ++k) {
    int n = 2 + k % 2;
    SiegelPoint base = sjt::rand_siegel(rng, n);
    SiegelPoint p = act_siegel(random_integral(rng, n, 6), base);
    SiegelReduction r = siegel_reduce(p);
    CHECK(r.cert.m1);
    CHECK(r.cert.m2);
    CHECK(r.cert.s1);
    CHECK(r.cert.s3);
    CHECK(minkowski_m2(r.point.omega.imag()));
    CHECK(r.point.omega.real().cwiseAbs().maxCoeff() <= 0.5);
    CHECK(min_candidate_factor(r.point) >= 1.0 - 1e-12);
    CHECK(verify_certificate(p, r) < 1e-9 * std::max(1.0, max_abs(r.point.omega)));
    for (size_t i = 1; i < r.cert.det_im.size(); ++i) CHECK(r.cert.det_im[i] >= r.cert.det_im[i - 1] * (1 - 1e-12));
    // orbit round trip
    SiegelPoint moved = act_siegel(random_integral(rng, n, 6), r.point);
    SiegelReduction r2 = siegel_reduce(moved);
    CHECK(std::abs(r2.point.omega.imag().determinant() - r.point.omega.imag().determinant()) <
          1e-9 * r.point.omega.imag().determinant());
  }
  json j = to_json(siegel_reduce(sjt::rand_siegel(rng, 2)).cert);
  CHECK(j.contains("gamma"));
  CHECK(j["enumeration_bound"] == 3);
}

TEST_CASE("jacobi reduction") {
  JacobiPoint p(CMatrix::Constant(1, 1, kI), CMatrix::Constant(1, 1, cplx(1.5, 2.5)));
  JacobiReduction r = jacobi_reduce(p);
  CHECK(std::abs(r.point.z(0, 0) - cplx(0.5, 0.5)) < 1e-14);
  CHECK(r.cert.heisenberg.lambda(0, 0) == cplx(-2.0));
  CHECK(r.cert.heisenberg.mu(0, 0) == cplx(-1.0));
  JacobiPoint inside(CMatrix::Constant(1, 1, kI), CMatrix::Constant(1, 1, cplx(0.25, 0.5)));
  JacobiReduction r0 = jacobi_reduce(inside);
  CHECK(max_abs(r0.cert.heisenberg.lambda) == 0.0);
  CHECK(max_abs(r0.cert.heisenberg.mu) == 0.0);
  std::mt19937_64 rng(12);
  for (int k = 0; k < 40; ++k) {
    int n = 1 + k % 3, m = 1 + k % 2;
    JacobiPoint q = sjt::rand_jacobi_point(rng, n, m);
    q.z *= 4.0;
    JacobiReduction jr = jacobi_reduce(q);
    CHECK(jr.cert.lambda_mu_in_unit_box);
    CHECK(jr.lambda.minCoeff() >= 0.0);
    CHECK(jr.lambda.maxCoeff() < 1.0);
    CHECK(jr.mu.minCoeff() >= 0.0);
    CHECK(jr.mu.maxCoeff() < 1.0);
    CHECK(verify_certificate(q, jr) < 1e-9 * std::max(1.0, max_abs(jr.point.z)));
    CHECK(validate(jr.cert.heisenberg));
    CHECK(max_abs(jr.cert.heisenberg.kappa - jr.cert.heisenberg.kappa.real().array().round().matrix().cast<cplx>()) ==
          0.0);
  }
}
