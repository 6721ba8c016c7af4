#include <cmath>

#include "sj/kernels.hpp"

namespace sj::kernels::scalar {

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    re += a[j].real() * b[j].real() - a[j].imag() * b[j].imag();
    im += a[j].real() * b[j].imag() + a[j].imag() * b[j].real();
  }
  return {re, im};
}

cplx phase_sum(const cplx* g, std::size_t n, double omega, double y0, double h) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = omega * (y0 + static_cast<double>(j) * h);
    const double c = std::cos(t), s = std::sin(t);
    // g (c - i s)
    re += g[j].real() * c + g[j].imag() * s;
    im += g[j].imag() * c - g[j].real() * s;
  }
  return {re, im};
}

}  // namespace sj::kernels::scalar
