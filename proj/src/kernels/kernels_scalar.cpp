#include <cmath>

#include "kernels_impl.hpp"

namespace qoc::kernels::detail {

void sincos_one(double x, double* s, double* c) {
  // k = round(x * 2/pi), r = x - k*pi/2 via the 3-term split.
  double kd = std::nearbyint(x * kTwoOverPi);
  double r = x - kd * kPio2_1;
  r -= kd * kPio2_2;
  r -= kd * kPio2_3;
  long long q = static_cast<long long>(kd);

  double z = r * r;
  double ps = kSinCoef[0];
  double pc = kCosCoef[0];
  for (int i = 1; i < 6; ++i) {
    ps = ps * z + kSinCoef[i];
    pc = pc * z + kCosCoef[i];
  }
  double sin_r = r + r * z * ps;
  double cos_r = 1.0 - 0.5 * z + z * z * pc;

  double sv = (q & 1) ? cos_r : sin_r;
  double cv = (q & 1) ? sin_r : cos_r;
  if (q & 2) sv = -sv;
  if ((q + 1) & 2) cv = -cv;
  *s = sv;
  *c = cv;
}

namespace {

void axpy_s(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_s(std::size_t n, double alpha, double* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double dot_s(std::size_t n, const double* x, const double* y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double nrm2sq_s(std::size_t n, const double* x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

cd zdotc_s(std::size_t n, const cd* x, const cd* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void zaxpy_s(std::size_t n, cd alpha, const cd* x, cd* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_s(std::size_t m, std::size_t n, std::size_t k, const double* a,
            const double* b, double* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    if (!accumulate)
      for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = a + i * k;
    for (std::size_t l = 0; l < k; ++l) {
      double ail = ai[l];
      const double* bl = b + l * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
}

void zgemm_s(std::size_t m, std::size_t n, std::size_t k, const cd* a,
             const cd* b, cd* c, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    cd* ci = c + i * n;
    if (!accumulate)
      for (std::size_t j = 0; j < n; ++j) ci[j] = cd{0.0, 0.0};
    const cd* ai = a + i * k;
    for (std::size_t l = 0; l < k; ++l) {
      cd ail = ai[l];
      const cd* bl = b + l * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
}

void gemv_s(std::size_t m, std::size_t n, const double* a, const double* x,
            double* y) {
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = dot_s(n, a + i * n, x);
  }
}

void vsincos_s(std::size_t n, const double* x, double* s, double* c) {
  for (std::size_t i = 0; i < n; ++i) sincos_one(x[i], s + i, c + i);
}

double trig_eval_s(std::size_t n, const double* amp_cos, const double* amp_sin,
                   const double* freq, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sv, cv;
    sincos_one(freq[i] * t, &sv, &cv);
    acc += amp_cos[i] * cv + amp_sin[i] * sv;
  }
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {axpy_s,  scal_s,  dot_s,  nrm2sq_s,
                          zdotc_s, zaxpy_s, gemm_s, zgemm_s,
                          gemv_s,  vsincos_s, trig_eval_s};
  return ops;
}

}  // namespace qoc::kernels::detail
