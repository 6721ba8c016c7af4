#include <doctest.h>

#include "sj/cayley.hpp"
#include "sj/groups.hpp"
#include "support.hpp"

using namespace sj;

TEST_CASE("cayley basics") {
  for (int n = 1; n <= 3; ++n)
    CHECK(sjt::diff(cayley(DiskPoint(zeros(n, n))).omega, CMatrix(kI * identity(n))) == 0.0);
  for (double r : {-0.9, -0.3, 0.0, 0.4, 0.95}) {
    CMatrix w = CMatrix::Constant(1, 1, r);
    cplx expect = kI * (1.0 + r) / (1.0 - r);
    CHECK(std::abs(cayley(DiskPoint(w)).omega(0, 0) - expect) < 1e-14);
  }
}

TEST_CASE("partial cayley special values") {
  JacobiPoint o = partial_cayley(JacobiDiskPoint(zeros(2, 2), zeros(1, 2)));
  CHECK(sjt::diff(o.omega, CMatrix(kI * identity(2))) == 0.0);
  CHECK(max_abs(o.z) == 0.0);
  std::mt19937_64 rng(31);
  CMatrix eta = sjt::rand_complex(rng, 2, 2);
  JacobiPoint q = partial_cayley(JacobiDiskPoint(zeros(2, 2), eta));
  CHECK(sjt::diff(q.z, CMatrix(2.0 * kI * eta)) < 1e-15);

  JacobiDiskPoint z = partial_cayley_inverse(JacobiPoint(CMatrix(kI * identity(2)), zeros(2, 2)));
  CHECK(max_abs(z.w) < 1e-16);
  CHECK(max_abs(z.eta) == 0.0);

  JacobiDiskPoint s = partial_cayley_inverse(
      JacobiPoint(CMatrix::Constant(1, 1, cplx(0, 2)), CMatrix::Constant(1, 1, cplx(1, 0))));
  CHECK(std::abs(s.w(0, 0) - cplx(1.0 / 3.0, 0)) < 1e-15);
  CHECK(std::abs(s.eta(0, 0) - cplx(0, -1.0 / 3.0)) < 1e-15);
}

TEST_CASE("round trips") {
  std::mt19937_64 rng(32);
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 2; ++m)
      for (int k = 0; k < 30; ++k) {
        JacobiPoint p = sjt::rand_jacobi_point(rng, n, m);
        JacobiPoint q = partial_cayley(partial_cayley_inverse(p));
        CHECK(sjt::diff(p.omega, q.omega) <= 1e-12 * std::max(1.0, max_abs(p.omega)));
        CHECK(sjt::diff(p.z, q.z) <= 1e-12 * std::max(1.0, max_abs(p.z)));
        JacobiDiskPoint d = sjt::rand_jacobi_disk(rng, n, m);
        JacobiDiskPoint e = partial_cayley_inverse(partial_cayley(d));
        CHECK(sjt::diff(d.w, e.w) <= 1e-12);
        CHECK(sjt::diff(d.eta, e.eta) <= 1e-12 * std::max(1.0, max_abs(d.eta)));
        SiegelPoint s = p.siegel();
        CHECK(sjt::diff(cayley(cayley_inverse(s)).omega, s.omega) <= 1e-12 * std::max(1.0, max_abs(s.omega)));
      }
}

TEST_CASE("compatibility with the group actions") {
  std::mt19937_64 rng(33);
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 2; ++m)
      for (int k = 0; k < 20; ++k) {
        JacobiGroupElement g = random_jacobi(rng, n, m);
        StarGroupElement gs = embed_star(g);
        JacobiDiskPoint d = sjt::rand_jacobi_disk(rng, n, m);
        JacobiPoint l = act_jacobi(g, partial_cayley(d));
        JacobiPoint r = partial_cayley(act_jacobi_disk(gs, d));
        double s = std::max({1.0, max_abs(l.omega), max_abs(l.z)});
        CHECK(sjt::diff(l.omega, r.omega) <= 1e-9 * s);
        CHECK(sjt::diff(l.z, r.z) <= 1e-9 * s);
        SiegelPoint a = act_siegel(g.sp, cayley(d.disk()));
        SiegelPoint b = cayley(act_disk(gs, d.disk()));
        CHECK(sjt::diff(a.omega, b.omega) <= 1e-9 * s);
      }
}

TEST_CASE("differential of Psi matches finite differences") {
  std::mt19937_64 rng(34);
  JacobiDiskPoint d = sjt::rand_jacobi_disk(rng, 2, 2);
  TangentVector t = sjt::rand_tangent(rng, 2, 2);
  TangentVector a = partial_cayley_differential(d, t);
  const double h = 1e-6;
  JacobiPoint p = partial_cayley(JacobiDiskPoint(CMatrix(d.w + h * t.d_omega), CMatrix(d.eta + h * t.d_z)));
  JacobiPoint q = partial_cayley(JacobiDiskPoint(CMatrix(d.w - h * t.d_omega), CMatrix(d.eta - h * t.d_z)));
  CHECK(sjt::diff(a.d_omega, CMatrix((p.omega - q.omega) / (2 * h))) < 1e-6);
  CHECK(sjt::diff(a.d_z, CMatrix((p.z - q.z) / (2 * h))) < 1e-6);
}
