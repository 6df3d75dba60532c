#include "qoc/operators.hpp"

#include <cmath>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"

namespace qoc {

HermitianOperator::HermitianOperator(ComplexMatrix m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw ValidationError("HermitianOperator: matrix must be square, dim >= 1");
  ComplexMatrix adj = m.adjoint();
  ComplexMatrix anti = m;
  anti -= adj;
  if (0.5 * anti.frobenius_norm() > tol)
    throw ValidationError("HermitianOperator: anti-Hermitian part exceeds " +
                          std::to_string(tol));
  m += adj;
  m *= cd{0.5, 0.0};
  m_ = std::move(m);
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(ComplexMatrix(dim, dim));
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(ComplexMatrix::identity(dim));
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  m_ += o.m_;
  return *this;
}
HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  m_ -= o.m_;
  return *this;
}
HermitianOperator& HermitianOperator::operator*=(double a) {
  m_ *= cd{a, 0.0};
  return *this;
}

HermitianOperator pauli_x() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_y() {
  ComplexMatrix m(2, 2);
  m(0, 1) = cd{0.0, -1.0};
  m(1, 0) = cd{0.0, 1.0};
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_z() {
  ComplexMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_on(int n_qubits, int site, char axis) {
  if (site < 0 || site >= n_qubits)
    throw ValidationError("pauli_on: site out of range");
  ComplexMatrix p;
  switch (axis) {
    case 'x': p = pauli_x().matrix(); break;
    case 'y': p = pauli_y().matrix(); break;
    case 'z': p = pauli_z().matrix(); break;
    default: throw ValidationError("pauli_on: axis must be x, y or z");
  }
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (int q = 0; q < n_qubits; ++q)
    out = kron(out, q == site ? p : ComplexMatrix::identity(2));
  return HermitianOperator(std::move(out));
}

HermitianOperator ising_hamiltonian(int n_qubits, const std::vector<double>& h,
                                    const std::vector<std::array<double, 3>>& couplings) {
  if (static_cast<int>(h.size()) != n_qubits && !h.empty())
    throw ValidationError("ising_hamiltonian: h must have n entries (or be empty)");
  const int d = 1 << n_qubits;
  // Diagonal in the computational basis; assemble entrywise.
  ComplexMatrix m(d, d);
  for (int b = 0; b < d; ++b) {
    double e = 0.0;
    auto spin = [&](int q) { return (b >> (n_qubits - 1 - q)) & 1 ? -1.0 : 1.0; };
    for (int q = 0; q < static_cast<int>(h.size()); ++q) e += h[q] * spin(q);
    for (const auto& c : couplings) {
      int i = static_cast<int>(c[0]);
      int j = static_cast<int>(c[1]);
      if (i < 0 || i >= n_qubits || j < 0 || j >= n_qubits)
        throw ValidationError("ising_hamiltonian: coupling index out of range");
      e += c[2] * spin(i) * spin(j);
    }
    m(b, b) = e;
  }
  return HermitianOperator(std::move(m));
}

HermitianOperator transverse_driver(int n_qubits) {
  const int d = 1 << n_qubits;
  HermitianOperator b = HermitianOperator::zero(d);
  for (int q = 0; q < n_qubits; ++q) b += pauli_on(n_qubits, q, 'x');
  return b;
}

HermitianOperator ground_state_projector(const HermitianOperator& h,
                                         double gap_tol) {
  Eigh e = eigh(h.matrix());
  const int n = h.dim();
  if (n > 1 && e.values[1] - e.values[0] <= gap_tol)
    throw ValidationError("ground_state_projector: ground state degenerate (gap " +
                          std::to_string(e.values[1] - e.values[0]) + ")");
  ComplexMatrix p(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p(i, j) = e.vectors(i, 0) * std::conj(e.vectors(j, 0));
  return HermitianOperator(std::move(p));
}

HermitianOperator random_hermitian(int dim, Rng& rng) {
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    m(i, i) = rng.normal();
    for (int j = i + 1; j < dim; ++j) {
      cd v{rng.normal() * M_SQRT1_2, rng.normal() * M_SQRT1_2};
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return HermitianOperator(std::move(m));
}

HermitianOperator random_density(int dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cd{rng.normal(), rng.normal()};
  ComplexMatrix rho = g * g.adjoint();
  double tr = rho.trace().real();
  rho *= cd{1.0 / tr, 0.0};
  return HermitianOperator(std::move(rho));
}

OperatorBasis OperatorBasis::gell_mann(int dim) {
  OperatorBasis b(dim);
  b.elements_.reserve(dim * dim);
  const double inv_sqrt2 = M_SQRT1_2;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      ComplexMatrix m(dim, dim);
      m(i, j) = inv_sqrt2;
      m(j, i) = inv_sqrt2;
      b.elements_.emplace_back(std::move(m));
    }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      ComplexMatrix m(dim, dim);
      m(i, j) = cd{0.0, -inv_sqrt2};
      m(j, i) = cd{0.0, inv_sqrt2};
      b.elements_.emplace_back(std::move(m));
    }
  for (int l = 1; l < dim; ++l) {
    double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    ComplexMatrix m(dim, dim);
    for (int k = 0; k < l; ++k) m(k, k) = norm;
    m(l, l) = -static_cast<double>(l) * norm;
    b.elements_.emplace_back(std::move(m));
  }
  {
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m *= cd{1.0 / std::sqrt(static_cast<double>(dim)), 0.0};
    b.elements_.emplace_back(std::move(m));
  }
  return b;
}

double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("hs_inner: dimension mismatch");
  return kernels::zdotc(a.size(), a.data(), b.data()).real();
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  return hs_inner(a.matrix(), b.matrix());
}

std::vector<double> coordinatize(const ComplexMatrix& x) {
  const int n = x.rows();
  if (n != x.cols()) throw ValidationError("coordinatize: matrix not square");
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  int idx = 0;
  const double sqrt2 = M_SQRT2;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v[idx++] = sqrt2 * x(i, j).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v[idx++] = -sqrt2 * x(i, j).imag();
  double partial = 0.0;  // running sum of diagonal entries
  for (int l = 1; l < n; ++l) {
    partial += x(l - 1, l - 1).real();
    double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    v[idx++] = norm * (partial - l * x(l, l).real());
  }
  partial += x(n - 1, n - 1).real();
  v[idx++] = partial / std::sqrt(static_cast<double>(n));
  return v;
}

std::vector<double> coordinatize(const HermitianOperator& x) {
  return coordinatize(x.matrix());
}

ComplexMatrix decoordinatize_matrix(const std::vector<double>& v, int dim) {
  if (static_cast<int>(v.size()) != dim * dim)
    throw ValidationError("decoordinatize: coordinate length != dim^2");
  ComplexMatrix x(dim, dim);
  int idx = 0;
  const double inv_sqrt2 = M_SQRT1_2;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      double a = v[idx++] * inv_sqrt2;
      x(i, j) += a;
      x(j, i) += a;
    }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      double b = v[idx++] * inv_sqrt2;
      x(i, j) += cd{0.0, -b};
      x(j, i) += cd{0.0, b};
    }
  for (int l = 1; l < dim; ++l) {
    double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    double c = v[idx++] * norm;
    for (int k = 0; k < l; ++k) x(k, k) += c;
    x(l, l) -= c * l;
  }
  double d0 = v[idx++] / std::sqrt(static_cast<double>(dim));
  for (int k = 0; k < dim; ++k) x(k, k) += d0;
  return x;
}

HermitianOperator decoordinatize(const std::vector<double>& v, int dim) {
  return HermitianOperator(decoordinatize_matrix(v, dim));
}

HermitianOperator Superoperator::apply(const HermitianOperator& x) const {
  return decoordinatize(m_.apply(coordinatize(x)), dim_);
}

Superoperator commutator_superop(const HermitianOperator& x) {
  const ComplexMatrix& xm = x.matrix();
  return superop_from_map(x.dim(), [&](const ComplexMatrix& f) {
    ComplexMatrix c = commutator(xm, f);
    c *= cd{0.0, -1.0};
    return c;
  });
}

}  // namespace qoc
