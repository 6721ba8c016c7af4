#include <doctest.h>

#include "sj/groups.hpp"
#include "support.hpp"

using namespace sj;

namespace {

// The Heisenberg product written out for m = n = 1 as plain scalars.
void scalar_heisenberg(double l1, double u1, double k1, double l2, double u2, double k2, double out[3]) {
  out[0] = l1 + l2;
  out[1] = u1 + u2;
  out[2] = k1 + k2 + l1 * u2 - u1 * l2;
}

}  // namespace

TEST_CASE("heisenberg law") {
  std::mt19937_64 rng(21);
  HeisenbergElement h = random_heisenberg(rng, 2, 3);
  HeisenbergElement e = HeisenbergElement::identity(2, 3);
  HeisenbergElement he = heisenberg_multiply(h, e);
  CHECK(sjt::diff(he.kappa, h.kappa) == 0.0);

  CMatrix l = sjt::rand_real(rng, 2, 3), u = sjt::rand_real(rng, 2, 3);
  HeisenbergElement a(l, zeros(2, 3), zeros(2, 2));
  HeisenbergElement b(zeros(2, 3), u, zeros(2, 2));
  HeisenbergElement ab = heisenberg_multiply(a, b);
  CHECK(sjt::diff(ab.kappa, CMatrix(l * u.transpose())) < 1e-15);
  CHECK(validate(ab));

  for (int k = 0; k < 50; ++k) {
    HeisenbergElement x = random_heisenberg(rng, 1, 1), y = random_heisenberg(rng, 1, 1);
    double o[3];
    scalar_heisenberg(x.lambda(0, 0).real(), x.mu(0, 0).real(), x.kappa(0, 0).real(), y.lambda(0, 0).real(),
                      y.mu(0, 0).real(), y.kappa(0, 0).real(), o);
    HeisenbergElement xy = heisenberg_multiply(x, y);
    CHECK(xy.lambda(0, 0).real() == doctest::Approx(o[0]));
    CHECK(xy.mu(0, 0).real() == doctest::Approx(o[1]));
    CHECK(xy.kappa(0, 0).real() == doctest::Approx(o[2]));
  }

  for (int k = 0; k < 20; ++k) {
    HeisenbergElement x = random_heisenberg(rng, 2, 2), y = random_heisenberg(rng, 2, 2),
                      z = random_heisenberg(rng, 2, 2);
    HeisenbergElement l1 = heisenberg_multiply(heisenberg_multiply(x, y), z);
    HeisenbergElement r1 = heisenberg_multiply(x, heisenberg_multiply(y, z));
    CHECK(sjt::diff(l1.kappa, r1.kappa) < 1e-12);
    CHECK(validate(l1));
  }
}

TEST_CASE("jacobi law") {
  std::mt19937_64 rng(22);
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 2; ++m)
      for (int k = 0; k < 10; ++k) {
        JacobiGroupElement a = random_jacobi(rng, n, m), b = random_jacobi(rng, n, m),
                           c = random_jacobi(rng, n, m);
        JacobiGroupElement e = JacobiGroupElement::identity(n, m);
        JacobiGroupElement ae = jacobi_multiply(a, e);
        CHECK(sjt::diff(ae.sp.mat, a.sp.mat) == 0.0);
        CHECK(sjt::diff(ae.h.kappa, a.h.kappa) == 0.0);
        JacobiGroupElement l = jacobi_multiply(jacobi_multiply(a, b), c);
        JacobiGroupElement r = jacobi_multiply(a, jacobi_multiply(b, c));
        double s = std::max(1.0, max_abs(l.sp.mat));
        CHECK(sjt::diff(l.sp.mat, r.sp.mat) < 1e-12 * s * s);
        CHECK(sjt::diff(l.h.lambda, r.h.lambda) < 1e-12 * s * s);
        CHECK(sjt::diff(l.h.kappa, r.h.kappa) < 1e-11 * s * s);
        CHECK(validate(l, Tolerance{1e-10, 1e-10}));
        JacobiGroupElement inv = jacobi_multiply(a, inverse(a));
        CHECK(sjt::diff(inv.sp.mat, identity(2 * n)) < 1e-10 * s);
        CHECK(max_abs(inv.h.lambda) + max_abs(inv.h.kappa) < 1e-10 * s * s);
      }
  // symplectic part times pure Heisenberg: (M,0)(I,h) = (M,h)
  JacobiGroupElement g{random_symplectic(rng, 2), HeisenbergElement::identity(1, 2)};
  JacobiGroupElement h{SymplecticElement::identity(2), random_heisenberg(rng, 1, 2)};
  JacobiGroupElement gh = jacobi_multiply(g, h);
  CHECK(sjt::diff(gh.h.lambda, h.h.lambda) == 0.0);
  CHECK(sjt::diff(gh.h.kappa, h.h.kappa) == 0.0);
  // (I,h)(M,0) = (M, ((lambda,mu) M; kappa))
  JacobiGroupElement hg = jacobi_multiply(h, g);
  CHECK(sjt::diff(hg.h.lambda, CMatrix(h.h.lambda * g.sp.a() + h.h.mu * g.sp.c())) < 1e-14);
  CHECK(sjt::diff(hg.h.mu, CMatrix(h.h.lambda * g.sp.b() + h.h.mu * g.sp.d())) < 1e-14);
}

TEST_CASE("symplectic closure") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 50; ++k) {
    SymplecticElement a = random_symplectic(rng, 3), b = random_symplectic(rng, 3);
    CHECK(validate(multiply(a, b)));
  }
  CHECK(validate(SymplecticElement::j(2)));
  CHECK(validate(SymplecticElement::sigma(2)));
  CMatrix bad = identity(2);
  bad(0, 0) = 2;
  CHECK_THROWS_AS(SymplecticElement{bad}, DomainError);
}

TEST_CASE("siegel action") {
  SiegelPoint p(CMatrix(2.0 * kI * identity(1)));
  CHECK(sjt::diff(act_siegel(SymplecticElement::identity(1), p).omega, p.omega) == 0.0);
  SiegelPoint q = act_siegel(SymplecticElement::j(1), p);
  CHECK(std::abs(q.omega(0, 0) - cplx(0, 0.5)) < 1e-15);

  std::mt19937_64 rng(24);
  // n = 1 against the scalar Moebius formula
  for (int k = 0; k < 30; ++k) {
    SymplecticElement g = random_symplectic(rng, 1);
    SiegelPoint x = sjt::rand_siegel(rng, 1);
    cplx w = x.omega(0, 0);
    cplx a = g.mat(0, 0), b = g.mat(0, 1), c = g.mat(1, 0), d = g.mat(1, 1);
    CHECK(std::abs(act_siegel(g, x).omega(0, 0) - (a * w + b) / (c * w + d)) < 1e-12);
  }
}

TEST_CASE("action axioms on all four spaces") {
  std::mt19937_64 rng(25);
  const Tolerance tol{1e-10, 1e-10};
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 2; ++m)
      for (int k = 0; k < 25; ++k) {
        JacobiGroupElement a = random_jacobi(rng, n, m), b = random_jacobi(rng, n, m);
        JacobiPoint x = sjt::rand_jacobi_point(rng, n, m);
        JacobiPoint l = act_jacobi(jacobi_multiply(a, b), x);
        JacobiPoint r = act_jacobi(a, act_jacobi(b, x));
        CHECK(tol.close(l.omega, r.omega));
        CHECK(tol.close(l.z, r.z));
        CHECK(validate(l));
        JacobiPoint e = act_jacobi(JacobiGroupElement::identity(n, m), x);
        CHECK(sjt::diff(e.omega, x.omega) == 0.0);

        SiegelPoint s = x.siegel();
        CHECK(tol.close(act_siegel(multiply(a.sp, b.sp), s).omega, act_siegel(a.sp, act_siegel(b.sp, s)).omega));

        StarGroupElement sa = embed_star(a), sb = embed_star(b);
        CHECK(validate(sa));
        JacobiDiskPoint d = sjt::rand_jacobi_disk(rng, n, m);
        JacobiDiskPoint dl = act_jacobi_disk(star_multiply(sa, sb), d);
        JacobiDiskPoint dr = act_jacobi_disk(sa, act_jacobi_disk(sb, d));
        CHECK(tol.close(dl.w, dr.w));
        CHECK(tol.close(dl.eta, dr.eta));
        CHECK(validate(dl));
        DiskPoint w = d.disk();
        CHECK(tol.close(act_disk(star_multiply(sa, sb), w).w, act_disk(sa, act_disk(sb, w)).w));
        CHECK(validate(act_disk(sa, w)));
      }
}

TEST_CASE("pure translation acts as Z + lambda Omega + mu") {
  std::mt19937_64 rng(26);
  JacobiPoint x = sjt::rand_jacobi_point(rng, 2, 2);
  JacobiGroupElement g{SymplecticElement::identity(2), random_heisenberg(rng, 2, 2)};
  JacobiPoint y = act_jacobi(g, x);
  CHECK(sjt::diff(y.z, CMatrix(x.z + g.h.lambda * x.omega + g.h.mu)) < 1e-15);
}

TEST_CASE("embedding is a homomorphism") {
  std::mt19937_64 rng(27);
  StarGroupElement e = embed_star(JacobiGroupElement::identity(2, 1));
  CHECK(sjt::diff(e.p, identity(2)) == 0.0);
  CHECK(max_abs(e.q) == 0.0);
  // J_n = [[0, I],[-I, 0]]: P = (i/2)(I - (-I)) = iI, Q = 0
  StarGroupElement j = embed_star(SymplecticElement::j(2));
  CHECK(sjt::diff(j.p, CMatrix(kI * identity(2))) < 1e-15);
  CHECK(max_abs(j.q) < 1e-15);
  StarGroupElement s = embed_star(SymplecticElement::sigma(2));
  CHECK(sjt::diff(s.p, CMatrix(-kI * identity(2))) < 1e-15);
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k < 30; ++k) {
      JacobiGroupElement a = random_jacobi(rng, n, 2), b = random_jacobi(rng, n, 2);
      StarGroupElement l = embed_star(jacobi_multiply(a, b));
      StarGroupElement r = star_multiply(embed_star(a), embed_star(b));
      double sc = std::max(1.0, max_abs(l.p));
      CHECK(sjt::diff(l.p, r.p) < 1e-10 * sc);
      CHECK(sjt::diff(l.q, r.q) < 1e-10 * sc);
      CHECK(sjt::diff(l.xi, r.xi) < 1e-10 * sc);
      CHECK(sjt::diff(l.kappa, r.kappa) < 1e-10 * sc * sc);
    }
}

TEST_CASE("random elements") {
  RandomElement a = random_element(99, GroupKind::jacobi, 2, 1);
  RandomElement b = random_element(99, GroupKind::jacobi, 2, 1);
  CHECK(sjt::diff(a.jacobi.sp.mat, b.jacobi.sp.mat) == 0.0);
  CHECK(sjt::diff(a.jacobi.h.kappa, b.jacobi.h.kappa) == 0.0);
  CHECK(validate(a.jacobi));
  CHECK(validate(a.star));
  RandomElement z = random_element(5, GroupKind::jacobi, 2, 1, 0);
  CHECK(sjt::diff(z.jacobi.sp.mat, identity(4)) == 0.0);
  CHECK(max_abs(z.jacobi.h.lambda) == 0.0);
  for (std::uint64_t seed = 0; seed < 40; ++seed)
    for (auto kind : {GroupKind::symplectic, GroupKind::heisenberg, GroupKind::jacobi, GroupKind::star}) {
      RandomElement r = random_element(seed, kind, 3, 2);
      CHECK(validate(r.jacobi));
      CHECK(validate(r.star));
    }
}

TEST_CASE("word syntax") {
  SymplecticElement g = parse_word("t(1);g(2);s", 1);
  SymplecticElement h =
      multiply(multiply(SymplecticElement::t(CMatrix::Constant(1, 1, 1.0)), SymplecticElement::g(CMatrix::Constant(1, 1, 2.0))),
               SymplecticElement::sigma(1));
  CHECK(sjt::diff(g.mat, h.mat) < 1e-15);
  SymplecticElement m = parse_word(R"(t({"rows":2,"cols":2,"data":[[1,0],[0.5,0],[0.5,0],[0,0]]});s)", 2);
  CHECK(validate(m));
  CHECK_THROWS_AS(parse_word("q(1)", 1), ParameterError);
}
