#include "qoc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"

namespace qoc {

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < d_.size(); ++i) m.d_[i] = std::conj(d_[i]);
  return m;
}

cd ComplexMatrix::trace() const {
  cd t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s =
      kernels::nrm2sq(2 * d_.size(), reinterpret_cast<const double*>(d_.data()));
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cd& v : d_) m = std::max(m, std::abs(v));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
  return *this;
}
ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] -= o.d_[i];
  return *this;
}
ComplexMatrix& ComplexMatrix::operator*=(cd alpha) {
  for (cd& v : d_) v *= alpha;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  kernels::zgemm(a.rows(), b.cols(), a.cols(), a.data(), b.data(), c.data());
  return c;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c = a * b;
  c -= b * a;
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      cd aij = a(i, j);
      if (aij == cd{0.0, 0.0}) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

RealMatrix RealMatrix::identity(int n) {
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

double RealMatrix::one_norm() const {
  double best = 0.0;
  for (int j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double RealMatrix::max_abs() const {
  double m = 0.0;
  for (double v : d_) m = std::max(m, std::abs(v));
  return m;
}

RealMatrix& RealMatrix::operator+=(const RealMatrix& o) {
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
  return *this;
}
RealMatrix& RealMatrix::operator-=(const RealMatrix& o) {
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] -= o.d_[i];
  return *this;
}
RealMatrix& RealMatrix::operator*=(double alpha) {
  kernels::scal(d_.size(), alpha, d_.data());
  return *this;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix c(a.rows(), b.cols());
  kernels::gemm(a.rows(), b.cols(), a.cols(), a.data(), b.data(), c.data());
  return c;
}

std::vector<double> RealMatrix::apply(const std::vector<double>& x) const {
  std::vector<double> y(rows_);
  kernels::gemv(rows_, cols_, data(), x.data(), y.data());
  return y;
}

void lu_solve(RealMatrix a, RealMatrix& b) {
  const int n = a.rows();
  std::vector<int> piv(n);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw NumericError("lu_solve: singular matrix");
    piv[k] = p;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      for (int j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(p, j));
    }
    double inv = 1.0 / a(k, k);
    for (int i = k + 1; i < n; ++i) {
      double f = a(i, k) * inv;
      a(i, k) = f;
      if (f != 0.0)
        kernels::axpy(n - k - 1, -f, &a(k, k + 1), &a(i, k + 1));
    }
  }
  // forward substitution (unit lower triangle)
  for (int k = 0; k < n; ++k)
    for (int i = k + 1; i < n; ++i) {
      double f = a(i, k);
      if (f != 0.0) kernels::axpy(b.cols(), -f, &b(k, 0), &b(i, 0));
    }
  // back substitution
  for (int k = n - 1; k >= 0; --k) {
    double inv = 1.0 / a(k, k);
    kernels::scal(b.cols(), inv, &b(k, 0));
    for (int i = 0; i < k; ++i) {
      double f = a(i, k);
      if (f != 0.0) kernels::axpy(b.cols(), -f, &b(k, 0), &b(i, 0));
    }
  }
}

RealMatrix expm(const RealMatrix& a) {
  // Higham's degree-13 Pade approximant with scaling and squaring.
  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};
  const double theta13 = 5.371920351148152;
  const int n = a.rows();

  double nrm = a.one_norm();
  int s = 0;
  if (nrm > theta13) {
    s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  }
  RealMatrix as = a;
  if (s > 0) as *= std::ldexp(1.0, -s);

  RealMatrix I = RealMatrix::identity(n);
  RealMatrix a2 = as * as;
  RealMatrix a4 = a2 * a2;
  RealMatrix a6 = a2 * a4;

  RealMatrix w1 = b[13] * a6 + b[11] * a4 + b[9] * a2;
  RealMatrix w2 = a6 * w1 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * I;
  RealMatrix u = as * w2;
  RealMatrix z1 = b[12] * a6 + b[10] * a4 + b[8] * a2;
  RealMatrix v = a6 * z1 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * I;

  RealMatrix p = v + u;
  RealMatrix q = v - u;
  lu_solve(std::move(q), p);  // p <- (v-u)^{-1} (v+u)

  for (int i = 0; i < s; ++i) p = p * p;
  return p;
}

namespace {

// One Jacobi rotation zeroing the (p,q) element of Hermitian a; accumulates
// the rotation into v.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
  const int n = a.rows();
  cd apq = a(p, q);
  double norm_apq = std::abs(apq);
  if (norm_apq == 0.0) return;
  cd u = apq / norm_apq;  // phase so that conj(u)*apq is real
  double app = a(p, p).real();
  double aqq = a(q, q).real();
  double tau = (aqq - app) / (2.0 * norm_apq);
  // Smaller-magnitude root of t^2 - 2*tau*t - 1 = 0.
  double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  double cth = 1.0 / std::sqrt(1.0 + t * t);
  double sth = t * cth;

  // G = [[c*u, -s*u], [s, c]] acting on columns (p,q); A <- G^dag A G.
  for (int k = 0; k < n; ++k) {
    cd akp = a(k, p), akq = a(k, q);
    a(k, p) = cth * u * akp + sth * akq;
    a(k, q) = -sth * u * akp + cth * akq;
  }
  for (int k = 0; k < n; ++k) {
    cd apk = a(p, k), aqk = a(q, k);
    a(p, k) = cth * std::conj(u) * apk + sth * aqk;
    a(q, k) = -sth * std::conj(u) * apk + cth * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (int k = 0; k < n; ++k) {
    cd vkp = v(k, p), vkq = v(k, q);
    v(k, p) = cth * u * vkp + sth * vkq;
    v(k, q) = -sth * u * vkp + cth * vkq;
  }
}

double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

Eigh eigh(const ComplexMatrix& hermitian) {
  const int n = hermitian.rows();
  if (n != hermitian.cols()) throw ValidationError("eigh: matrix not square");
  ComplexMatrix a = hermitian;
  ComplexMatrix v = ComplexMatrix::identity(n);

  double scale = a.frobenius_norm();
  if (scale == 0.0) scale = 1.0;
  const double tol = 1e-15 * scale;
  const int max_sweeps = 60;
  int sweep = 0;
  while (offdiag_norm(a) > tol) {
    if (++sweep > max_sweeps)
      throw NumericError("eigh: Jacobi failed to converge");
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > tol / (n * n)) jacobi_rotate(a, v, p, q);
  }

  Eigh out;
  out.values.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return a(i, i).real() < a(j, j).real();
  });
  out.vectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

ComplexMatrix Eigh::column(int k) const {
  ComplexMatrix c(vectors.rows(), 1);
  for (int i = 0; i < vectors.rows(); ++i) c(i, 0) = vectors(i, k);
  return c;
}

ComplexMatrix unitary_conjugate(const Eigh& h, double t, const ComplexMatrix& x) {
  const int n = h.vectors.rows();
  // X' = V diag(e^{-i t E}) V^dag X V diag(e^{i t E}) V^dag
  ComplexMatrix xe = h.vectors.adjoint() * x * h.vectors;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double w = h.values[i] - h.values[j];
      xe(i, j) *= cd{std::cos(w * t), -std::sin(w * t)};
    }
  return h.vectors * xe * h.vectors.adjoint();
}

}  // namespace qoc
