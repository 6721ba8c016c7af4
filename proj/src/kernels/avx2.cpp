#include <immintrin.h>

#include <cmath>

#include "sj/kernels.hpp"

namespace sj::kernels::avx2 {

namespace {

// Horizontal sum of the four lanes.
double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Deinterleave 4 complex values at p into (re, im) vectors.
inline void load4(const cplx* p, __m256d& re, __m256d& im) {
  const double* d = reinterpret_cast<const double*>(p);
  __m256d x = _mm256_loadu_pd(d);      // r0 i0 r1 i1
  __m256d y = _mm256_loadu_pd(d + 4);  // r2 i2 r3 i3
  __m256d lo = _mm256_permute2f128_pd(x, y, 0x20);  // r0 i0 r2 i2
  __m256d hi = _mm256_permute2f128_pd(x, y, 0x31);  // r1 i1 r3 i3
  re = _mm256_unpacklo_pd(lo, hi);  // r0 r1 r2 r3
  im = _mm256_unpackhi_pd(lo, hi);  // i0 i1 i2 i3
}

// Phasors are re-seeded exactly every kReseed blocks of four to bound drift.
constexpr std::size_t kReseed = 16;

}  // namespace

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc_re = _mm256_setzero_pd(), acc_im = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d ar, ai, br, bi;
    load4(a + j, ar, ai);
    load4(b + j, br, bi);
    acc_re = _mm256_fmadd_pd(ar, br, acc_re);
    acc_re = _mm256_fnmadd_pd(ai, bi, acc_re);
    acc_im = _mm256_fmadd_pd(ar, bi, acc_im);
    acc_im = _mm256_fmadd_pd(ai, br, acc_im);
  }
  cplx tail = scalar::cdot(a + j, b + j, n - j);
  return {hsum(acc_re) + tail.real(), hsum(acc_im) + tail.imag()};
}

cplx phase_sum(const cplx* g, std::size_t n, double omega, double y0, double h) {
  __m256d acc_re = _mm256_setzero_pd(), acc_im = _mm256_setzero_pd();
  // e^{-i omega 4h}
  const __m256d step_c = _mm256_set1_pd(std::cos(4.0 * omega * h));
  const __m256d step_s = _mm256_set1_pd(-std::sin(4.0 * omega * h));
  std::size_t j = 0;
  while (j + 4 <= n) {
    alignas(32) double c0[4], s0[4];
    for (int l = 0; l < 4; ++l) {
      const double t = omega * (y0 + static_cast<double>(j + l) * h);
      c0[l] = std::cos(t);
      s0[l] = -std::sin(t);
    }
    __m256d pc = _mm256_load_pd(c0), ps = _mm256_load_pd(s0);
    for (std::size_t blk = 0; blk < kReseed && j + 4 <= n; ++blk, j += 4) {
      __m256d gr, gi;
      load4(g + j, gr, gi);
      // g * p
      acc_re = _mm256_fmadd_pd(gr, pc, acc_re);
      acc_re = _mm256_fnmadd_pd(gi, ps, acc_re);
      acc_im = _mm256_fmadd_pd(gr, ps, acc_im);
      acc_im = _mm256_fmadd_pd(gi, pc, acc_im);
      // p *= step
      __m256d nc = _mm256_fmsub_pd(pc, step_c, _mm256_mul_pd(ps, step_s));
      __m256d ns = _mm256_fmadd_pd(pc, step_s, _mm256_mul_pd(ps, step_c));
      pc = nc;
      ps = ns;
    }
  }
  cplx tail = scalar::phase_sum(g + j, n - j, omega, y0 + static_cast<double>(j) * h, h);
  return {hsum(acc_re) + tail.real(), hsum(acc_im) + tail.imag()};
}

}  // namespace sj::kernels::avx2
