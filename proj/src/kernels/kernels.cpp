#include "qoc/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_impl.hpp"

namespace qoc::kernels {

namespace {

using detail::Ops;

const Ops* g_ops = nullptr;
Backend g_backend = Backend::scalar;

bool detect_avx2() {
#if defined(QOC_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void init_once() {
  if (g_ops) return;
  Backend want = detect_avx2() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("QOC_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) want = Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && detect_avx2()) want = Backend::avx2;
  }
#if defined(QOC_HAVE_AVX2)
  g_ops = (want == Backend::avx2) ? &detail::avx2_ops() : &detail::scalar_ops();
#else
  g_ops = &detail::scalar_ops();
  want = Backend::scalar;
#endif
  g_backend = want;
}

const Ops& ops() {
  init_once();
  return *g_ops;
}

}  // namespace

bool cpu_supports_avx2() { return detect_avx2(); }

Backend active_backend() {
  init_once();
  return g_backend;
}

const char* backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
  init_once();
  if (b == Backend::avx2) {
#if defined(QOC_HAVE_AVX2)
    if (!detect_avx2())
      throw std::runtime_error("AVX2 backend requested but CPU lacks AVX2/FMA");
    g_ops = &detail::avx2_ops();
    g_backend = Backend::avx2;
    return;
#else
    throw std::runtime_error("AVX2 backend not compiled in");
#endif
  }
  g_ops = &detail::scalar_ops();
  g_backend = Backend::scalar;
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  ops().axpy(n, alpha, x, y);
}
void scal(std::size_t n, double alpha, double* x) { ops().scal(n, alpha, x); }
double dot(std::size_t n, const double* x, const double* y) {
  return ops().dot(n, x, y);
}
double nrm2sq(std::size_t n, const double* x) { return ops().nrm2sq(n, x); }
cd zdotc(std::size_t n, const cd* x, const cd* y) {
  return ops().zdotc(n, x, y);
}
void zaxpy(std::size_t n, cd alpha, const cd* x, cd* y) {
  ops().zaxpy(n, alpha, x, y);
}
void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a,
          const double* b, double* c, bool accumulate) {
  ops().gemm(m, n, k, a, b, c, accumulate);
}
void zgemm(std::size_t m, std::size_t n, std::size_t k, const cd* a,
           const cd* b, cd* c, bool accumulate) {
  ops().zgemm(m, n, k, a, b, c, accumulate);
}
void gemv(std::size_t m, std::size_t n, const double* a, const double* x,
          double* y) {
  ops().gemv(m, n, a, x, y);
}
void vsincos(std::size_t n, const double* x, double* s, double* c) {
  ops().vsincos(n, x, s, c);
}
double trig_eval(std::size_t n, const double* amp_cos, const double* amp_sin,
                 const double* freq, double t) {
  return ops().trig_eval(n, amp_cos, amp_sin, freq, t);
}

}  // namespace qoc::kernels
