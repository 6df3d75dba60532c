#pragma once

#include "qoc/kernels.hpp"

// Internal declarations shared by the dispatch table and the per-backend
// translation units. Not installed.
namespace qoc::kernels::detail {

// Cody-Waite split of pi/2 (fdlibm constants) and Cephes minimax
// coefficients. Both backends implement the identical algorithm so the
// equivalence tests can use a tight tolerance.
inline constexpr double kTwoOverPi = 6.36619772367581382433e-01;
inline constexpr double kPio2_1 = 1.57079632673412561417e+00;
inline constexpr double kPio2_2 = 6.07710050630396597660e-11;
inline constexpr double kPio2_3 = 2.02226624871116645580e-21;

inline constexpr double kSinCoef[6] = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8,
    2.75573136213857245213e-6,  -1.98412698295895385996e-4,
    8.33333333332211858878e-3,  -1.66666666666666307295e-1};
inline constexpr double kCosCoef[6] = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9,
    -2.75573141792967388112e-7,  2.48015872888517179954e-5,
    -1.38888888888730564116e-3,  4.16666666666665929218e-2};

// sin/cos of one argument through the shared reduction; used by the scalar
// backend and by the AVX2 tail loop.
void sincos_one(double x, double* s, double* c);

struct Ops {
  void (*axpy)(std::size_t, double, const double*, double*);
  void (*scal)(std::size_t, double, double*);
  double (*dot)(std::size_t, const double*, const double*);
  double (*nrm2sq)(std::size_t, const double*);
  cd (*zdotc)(std::size_t, const cd*, const cd*);
  void (*zaxpy)(std::size_t, cd, const cd*, cd*);
  void (*gemm)(std::size_t, std::size_t, std::size_t, const double*,
               const double*, double*, bool);
  void (*zgemm)(std::size_t, std::size_t, std::size_t, const cd*, const cd*,
                cd*, bool);
  void (*gemv)(std::size_t, std::size_t, const double*, const double*,
               double*);
  void (*vsincos)(std::size_t, const double*, double*, double*);
  double (*trig_eval)(std::size_t, const double*, const double*, const double*,
                      double);
};

const Ops& scalar_ops();

#if defined(QOC_HAVE_AVX2)
const Ops& avx2_ops();
#endif

}  // namespace qoc::kernels::detail
