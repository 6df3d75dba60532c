#if defined(QOC_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace qoc::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

void axpy_v(std::size_t n, double alpha, const double* x, double* y) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_v(std::size_t n, double alpha, double* x) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

double dot_v(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

double nrm2sq_v(std::size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * x[i];
  return r;
}

cd zdotc_v(std::size_t n, const cd* x, const cd* y) {
  // Lanes hold [re0, im0, re1, im1]; accumulate re/im parts separately.
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    __m256d vy = _mm256_loadu_pd(yp + 2 * i);
    acc_re = _mm256_fmadd_pd(vx, vy, acc_re);  // xr*yr, xi*yi pairs
    __m256d vysw = _mm256_permute_pd(vy, 0b0101);
    acc_im = _mm256_fmadd_pd(vx, vysw, acc_im);  // xr*yi, xi*yr pairs
  }
  double re = hsum(acc_re);
  // im lanes alternate +xr*yi, -xi*yr
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, acc_im);
  double im = tmp[0] - tmp[1] + tmp[2] - tmp[3];
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

// y += alpha*x over [re,im] interleaved lanes.
inline void zaxpy_rows(std::size_t n2, double ar, double ai, const double* x,
                       double* y) {
  __m256d vre = _mm256_set1_pd(ar);
  __m256d vim = _mm256_set1_pd(ai);
  std::size_t i = 0;
  for (; i + 4 <= n2; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d t = _mm256_mul_pd(vim, _mm256_permute_pd(vx, 0b0101));
    // (ar*xr - ai*xi, ar*xi + ai*xr)
    __m256d prod = _mm256_addsub_pd(_mm256_mul_pd(vre, vx), t);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, prod));
  }
  for (; i + 2 <= n2; i += 2) {
    double xr = x[i], xi = x[i + 1];
    y[i] += ar * xr - ai * xi;
    y[i + 1] += ar * xi + ai * xr;
  }
}

void zaxpy_v(std::size_t n, cd alpha, const cd* x, cd* y) {
  zaxpy_rows(2 * n, alpha.real(), alpha.imag(),
             reinterpret_cast<const double*>(x), reinterpret_cast<double*>(y));
}

void gemm_v(std::size_t m, std::size_t n, std::size_t k, const double* a,
            const double* b, double* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    if (!accumulate)
      for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = a + i * k;
    for (std::size_t l = 0; l < k; ++l) {
      axpy_v(n, ai[l], b + l * n, ci);
    }
  }
}

void zgemm_v(std::size_t m, std::size_t n, std::size_t k, const cd* a,
             const cd* b, cd* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    cd* ci = c + i * n;
    if (!accumulate)
      for (std::size_t j = 0; j < n; ++j) ci[j] = cd{0.0, 0.0};
    const cd* ai = a + i * k;
    for (std::size_t l = 0; l < k; ++l) {
      zaxpy_rows(2 * n, ai[l].real(), ai[l].imag(),
                 reinterpret_cast<const double*>(b + l * n),
                 reinterpret_cast<double*>(ci));
    }
  }
}

void gemv_v(std::size_t m, std::size_t n, const double* a, const double* x,
            double* y) {
  for (std::size_t i = 0; i < m; ++i) y[i] = dot_v(n, a + i * n, x);
}

// 4-lane sin/cos, same reduction and polynomials as the scalar path.
inline void sincos4(__m256d x, __m256d* s, __m256d* c) {
  const __m256d two_over_pi = _mm256_set1_pd(kTwoOverPi);
  const __m256d p1 = _mm256_set1_pd(kPio2_1);
  const __m256d p2 = _mm256_set1_pd(kPio2_2);
  const __m256d p3 = _mm256_set1_pd(kPio2_3);

  __m256d kd = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(kd, p1, x);
  r = _mm256_fnmadd_pd(kd, p2, r);
  r = _mm256_fnmadd_pd(kd, p3, r);

  __m128i q = _mm256_cvtpd_epi32(kd);

  __m256d z = _mm256_mul_pd(r, r);
  __m256d ps = _mm256_set1_pd(kSinCoef[0]);
  __m256d pc = _mm256_set1_pd(kCosCoef[0]);
  for (int i = 1; i < 6; ++i) {
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kSinCoef[i]));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kCosCoef[i]));
  }
  __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);
  __m256d cos_r = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                  _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z,
                                                   _mm256_set1_pd(1.0)));

  __m128i one = _mm_set1_epi32(1);
  __m128i two = _mm_set1_epi32(2);
  __m128i swap32 = _mm_cmpeq_epi32(_mm_and_si128(q, one), one);
  __m128i negs32 = _mm_cmpeq_epi32(_mm_and_si128(q, two), two);
  __m128i negc32 = _mm_cmpeq_epi32(
      _mm_and_si128(_mm_add_epi32(q, one), two), two);
  __m256d swap = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(swap32));
  __m256d negs = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(negs32));
  __m256d negc = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(negc32));

  __m256d sv = _mm256_blendv_pd(sin_r, cos_r, swap);
  __m256d cv = _mm256_blendv_pd(cos_r, sin_r, swap);
  const __m256d signbit = _mm256_set1_pd(-0.0);
  sv = _mm256_xor_pd(sv, _mm256_and_pd(negs, signbit));
  cv = _mm256_xor_pd(cv, _mm256_and_pd(negc, signbit));
  *s = sv;
  *c = cv;
}

void vsincos_v(std::size_t n, const double* x, double* s, double* c) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs, vc;
    sincos4(_mm256_loadu_pd(x + i), &vs, &vc);
    _mm256_storeu_pd(s + i, vs);
    _mm256_storeu_pd(c + i, vc);
  }
  for (; i < n; ++i) sincos_one(x[i], s + i, c + i);
}

double trig_eval_v(std::size_t n, const double* amp_cos, const double* amp_sin,
                   const double* freq, double t) {
  __m256d vt = _mm256_set1_pd(t);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs, vc;
    sincos4(_mm256_mul_pd(_mm256_loadu_pd(freq + i), vt), &vs, &vc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(amp_cos + i), vc, acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(amp_sin + i), vs, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    double sv, cv;
    sincos_one(freq[i] * t, &sv, &cv);
    r += amp_cos[i] * cv + amp_sin[i] * sv;
  }
  return r;
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops = {axpy_v,  scal_v,  dot_v,  nrm2sq_v,
                          zdotc_v, zaxpy_v, gemm_v, zgemm_v,
                          gemv_v,  vsincos_v, trig_eval_v};
  return ops;
}

}  // namespace qoc::kernels::detail

#endif  // QOC_HAVE_AVX2
