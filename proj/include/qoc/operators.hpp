#pragma once

#include <array>
#include <string>
#include <vector>

#include "qoc/linalg.hpp"
#include "qoc/rng.hpp"

namespace qoc {

// n x n complex Hermitian matrix. The constructor symmetrizes (X + X^dag)/2
// and rejects inputs whose anti-Hermitian part exceeds `tol`.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m, double tol = 1e-8);

  int dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  cd entry(int i, int j) const { return m_(i, j); }

  static HermitianOperator zero(int dim);
  static HermitianOperator identity(int dim);

  double trace() const { return m_.trace().real(); }
  double norm() const { return m_.frobenius_norm(); }

  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  HermitianOperator& operator*=(double a);
  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) {
    return a += b;
  }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) {
    return a -= b;
  }
  friend HermitianOperator operator*(double a, HermitianOperator x) { return x *= a; }

 private:
  ComplexMatrix m_;
};

// Pauli matrices and common constructions.
HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();
// sigma^a acting on qubit `site` of an n-qubit register.
HermitianOperator pauli_on(int n_qubits, int site, char axis);
// C = sum_i h_i sz_i + sum_{(i,j)} J_ij sz_i sz_j
HermitianOperator ising_hamiltonian(int n_qubits, const std::vector<double>& h,
                                    const std::vector<std::array<double, 3>>& couplings);
// B = sum_i sx_i
HermitianOperator transverse_driver(int n_qubits);
// Projector onto the (nondegenerate) ground state; throws if the gap is
// below `gap_tol`.
HermitianOperator ground_state_projector(const HermitianOperator& h,
                                         double gap_tol = 1e-10);
HermitianOperator random_hermitian(int dim, Rng& rng);
HermitianOperator random_density(int dim, Rng& rng);

// Orthonormal Hermitian basis: generalized Gell-Mann matrices in a fixed
// order (symmetric pairs, antisymmetric pairs, diagonal ladder), then
// I/sqrt(n) last. Tr(F_i F_j) = delta_ij.
class OperatorBasis {
 public:
  static OperatorBasis gell_mann(int dim);

  int dim() const { return dim_; }
  int size() const { return dim_ * dim_; }
  const std::vector<HermitianOperator>& elements() const { return elements_; }

 private:
  explicit OperatorBasis(int dim) : dim_(dim) {}
  int dim_ = 0;
  std::vector<HermitianOperator> elements_;
};

// <A, B> = Tr(A^dag B); real for Hermitian arguments.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);
double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

// Coordinates of X in the canonical Gell-Mann basis of its dimension.
std::vector<double> coordinatize(const HermitianOperator& x);
std::vector<double> coordinatize(const ComplexMatrix& x);  // Hermitian input
HermitianOperator decoordinatize(const std::vector<double>& v, int dim);
ComplexMatrix decoordinatize_matrix(const std::vector<double>& v, int dim);

// Hermiticity-preserving linear map on operators, stored as the real
// n^2 x n^2 matrix of its coordinates.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(int dim, RealMatrix m) : dim_(dim), m_(std::move(m)) {}

  int dim() const { return dim_; }  // Hilbert-space dimension n
  const RealMatrix& matrix() const { return m_; }
  RealMatrix& matrix() { return m_; }

  Superoperator adjoint() const { return {dim_, m_.transpose()}; }
  std::vector<double> apply(const std::vector<double>& v) const { return m_.apply(v); }
  HermitianOperator apply(const HermitianOperator& x) const;

  Superoperator& operator+=(const Superoperator& o) {
    m_ += o.m_;
    return *this;
  }
  friend Superoperator operator+(Superoperator a, const Superoperator& b) {
    return a += b;
  }
  Superoperator& operator*=(double a) {
    m_ *= a;
    return *this;
  }
  friend Superoperator operator*(double a, Superoperator s) { return s *= a; }

 private:
  int dim_ = 0;
  RealMatrix m_;
};

// K_X = -i [X, .]; coordinatized matrix is real antisymmetric.
Superoperator commutator_superop(const HermitianOperator& x);

// Build a superoperator column-by-column from an arbitrary
// Hermiticity-preserving map given as matrices.
template <typename MapFn>
Superoperator superop_from_map(int dim, MapFn&& map) {
  const int n2 = dim * dim;
  RealMatrix m(n2, n2);
  const OperatorBasis basis = OperatorBasis::gell_mann(dim);
  for (int j = 0; j < n2; ++j) {
    ComplexMatrix img = map(basis.elements()[j].matrix());
    std::vector<double> col = coordinatize(img);
    for (int i = 0; i < n2; ++i) m(i, j) = col[i];
  }
  return {dim, std::move(m)};
}

}  // namespace qoc
