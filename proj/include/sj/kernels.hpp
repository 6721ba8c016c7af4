#pragma once

#include <complex>
#include <cstddef>

namespace sj::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

// Backend picked once at first use: AVX2 when the CPU supports it and the
// build includes it, unless SJ_FORCE_SCALAR is set to a non-empty value.
Backend active_backend();
bool backend_available(Backend b);
const char* backend_name(Backend b);

// sum_j a_j b_j (no conjugation)
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
// sum_j g_j exp(-i omega (y0 + j h))
cplx phase_sum(const cplx* g, std::size_t n, double omega, double y0, double h);

// Explicit backends for equivalence testing. Calling an unavailable backend
// throws sj::ParameterError.
cplx cdot(Backend b, const cplx* a, const cplx* b_, std::size_t n);
cplx phase_sum(Backend b, const cplx* g, std::size_t n, double omega, double y0, double h);

namespace scalar {
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
cplx phase_sum(const cplx* g, std::size_t n, double omega, double y0, double h);
}  // namespace scalar

namespace avx2 {
cplx cdot(const cplx* a, const cplx* b, std::size_t n);
cplx phase_sum(const cplx* g, std::size_t n, double omega, double y0, double h);
}  // namespace avx2

}  // namespace sj::kernels
