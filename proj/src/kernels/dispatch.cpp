#include <cstdlib>

#include "sj/kernels.hpp"
#include "sj/linalg.hpp"

namespace sj::kernels {

#ifndef SJ_HAVE_AVX2
namespace avx2 {
cplx cdot(const cplx*, const cplx*, std::size_t) { throw ParameterError("AVX2 kernels not built"); }
cplx phase_sum(const cplx*, std::size_t, double, double, double) { throw ParameterError("AVX2 kernels not built"); }
}  // namespace avx2
#endif

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
#if defined(SJ_HAVE_AVX2) && (defined(__x86_64__) || defined(_M_X64))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() {
  static const Backend chosen = [] {
    const char* force = std::getenv("SJ_FORCE_SCALAR");
    if (force && *force) return Backend::scalar;
    return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
  }();
  return chosen;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

cplx cdot(Backend b, const cplx* a, const cplx* b_, std::size_t n) {
  if (!backend_available(b)) throw ParameterError("kernel backend not available");
  return b == Backend::avx2 ? avx2::cdot(a, b_, n) : scalar::cdot(a, b_, n);
}

cplx phase_sum(Backend b, const cplx* g, std::size_t n, double omega, double y0, double h) {
  if (!backend_available(b)) throw ParameterError("kernel backend not available");
  return b == Backend::avx2 ? avx2::phase_sum(g, n, omega, y0, h) : scalar::phase_sum(g, n, omega, y0, h);
}

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
  return active_backend() == Backend::avx2 ? avx2::cdot(a, b, n) : scalar::cdot(a, b, n);
}

cplx phase_sum(const cplx* g, std::size_t n, double omega, double y0, double h) {
  return active_backend() == Backend::avx2 ? avx2::phase_sum(g, n, omega, y0, h)
                                           : scalar::phase_sum(g, n, omega, y0, h);
}

}  // namespace sj::kernels
