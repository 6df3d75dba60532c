#pragma once

#include <complex>
#include <vector>

namespace qoc {

using cd = std::complex<double>;

// Dense row-major complex matrix. Value type; all arithmetic returns fresh
// matrices.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows) * cols) {}

  static ComplexMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cd& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * cols_ + j]; }
  const cd& operator()(int i, int j) const {
    return d_[static_cast<std::size_t>(i) * cols_ + j];
  }
  cd* data() { return d_.data(); }
  const cd* data() const { return d_.data(); }
  std::size_t size() const { return d_.size(); }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  cd trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cd alpha);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(cd alpha, ComplexMatrix a) { return a *= alpha; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cd> d_;
};

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Dense row-major real matrix.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows) * cols) {}

  static RealMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) {
    return d_[static_cast<std::size_t>(i) * cols_ + j];
  }
  const double& operator()(int i, int j) const {
    return d_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }

  RealMatrix transpose() const;
  double one_norm() const;  // max column abs sum
  double max_abs() const;

  RealMatrix& operator+=(const RealMatrix& o);
  RealMatrix& operator-=(const RealMatrix& o);
  RealMatrix& operator*=(double alpha);

  friend RealMatrix operator+(RealMatrix a, const RealMatrix& b) { return a += b; }
  friend RealMatrix operator-(RealMatrix a, const RealMatrix& b) { return a -= b; }
  friend RealMatrix operator*(double alpha, RealMatrix a) { return a *= alpha; }
  friend RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);

  std::vector<double> apply(const std::vector<double>& x) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> d_;
};

// exp(A) by Pade-13 with scaling and squaring.
RealMatrix expm(const RealMatrix& a);

// Solve A X = B in place (B overwritten with X); partial-pivot LU.
// Throws NumericError on a singular pivot.
void lu_solve(RealMatrix a, RealMatrix& b);

// Hermitian eigendecomposition (cyclic complex Jacobi). Eigenvalues ascending;
// vectors.column(k) is the k-th eigenvector.
struct Eigh {
  std::vector<double> values;
  ComplexMatrix vectors;  // columns are eigenvectors
  ComplexMatrix column(int k) const;
};
Eigh eigh(const ComplexMatrix& hermitian);

// exp(-i t H) X exp(i t H) for Hermitian H via its eigendecomposition.
ComplexMatrix unitary_conjugate(const Eigh& h, double t, const ComplexMatrix& x);

}  // namespace qoc
