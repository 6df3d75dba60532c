#pragma once

#include <cmath>
#include <vector>

#include "qoc/linalg.hpp"
#include "qoc/operators.hpp"
#include "qoc/rng.hpp"

namespace qoc::test {

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix d = a;
  d -= b;
  return d.max_abs();
}

inline double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix d = a;
  d -= b;
  return d.max_abs();
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// sigma_a / 2 operators of the single-qubit problem
inline HermitianOperator half(const HermitianOperator& p) { return 0.5 * p; }

inline ComplexMatrix random_complex(int rows, int cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cd{rng.normal(), rng.normal()};
  return m;
}

}  // namespace qoc::test
