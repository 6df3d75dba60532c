#pragma once

#include <complex>
#include <cstddef>

// Dense arithmetic kernels used by the linear-algebra layer. Every kernel has
// a scalar reference implementation and, on x86-64 with AVX2/FMA, a vectorized
// variant selected at runtime. The two paths are equivalence-tested against
// each other; callers never see which one runs.
namespace qoc::kernels {

using cd = std::complex<double>;

enum class Backend { scalar, avx2 };

// Backend in effect (honours QOC_SIMD=scalar|avx2 at first use).
Backend active_backend();
const char* backend_name();
bool cpu_supports_avx2();

// Force a backend; throws std::runtime_error if unsupported on this CPU.
// Intended for the scalar-vs-simd equivalence tests.
void set_backend(Backend b);

// y[i] += alpha * x[i]
void axpy(std::size_t n, double alpha, const double* x, double* y);
// x[i] *= alpha
void scal(std::size_t n, double alpha, double* x);
// sum x[i] * y[i]
double dot(std::size_t n, const double* x, const double* y);
// sum x[i]^2
double nrm2sq(std::size_t n, const double* x);

// sum conj(x[i]) * y[i]
cd zdotc(std::size_t n, const cd* x, const cd* y);
// y[i] += alpha * x[i]
void zaxpy(std::size_t n, cd alpha, const cd* x, cd* y);

// Row-major C(m x n) = A(m x k) * B(k x n), or += if accumulate.
void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a,
          const double* b, double* c, bool accumulate = false);
void zgemm(std::size_t m, std::size_t n, std::size_t k, const cd* a,
           const cd* b, cd* c, bool accumulate = false);

// y(m) = A(m x n) * x(n), row-major.
void gemv(std::size_t m, std::size_t n, const double* a, const double* x,
          double* y);

// Element-wise sin/cos. Accuracy ~1e-14 absolute for |x| <= ~1e6 (Cody-Waite
// reduction, Cephes minimax polynomials on the reduced octant).
void vsincos(std::size_t n, const double* x, double* s, double* c);

// sum amp_cos[i]*cos(freq[i]*t) + amp_sin[i]*sin(freq[i]*t)
// Hot loop of the trigonometric-polynomial crossing scans.
double trig_eval(std::size_t n, const double* amp_cos, const double* amp_sin,
                 const double* freq, double t);

}  // namespace qoc::kernels
