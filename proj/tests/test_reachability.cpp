#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qoc/errors.hpp"
#include "qoc/reachability.hpp"

using namespace qoc;

namespace {

// Haar-ish unitary via Gram-Schmidt on a random complex matrix.
ComplexMatrix random_unitary(int n, Rng& rng) {
  ComplexMatrix m = qoc::test::random_complex(n, n, rng);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      cd overlap{0.0, 0.0};
      for (int i = 0; i < n; ++i) overlap += std::conj(m(i, k)) * m(i, j);
      for (int i = 0; i < n; ++i) m(i, j) -= overlap * m(i, k);
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += std::norm(m(i, j));
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) m(i, j) /= norm;
  }
  return m;
}

HermitianOperator heisenberg_pair() {
  ComplexMatrix xx = kron(pauli_x().matrix(), pauli_x().matrix());
  ComplexMatrix yy = kron(pauli_y().matrix(), pauli_y().matrix());
  ComplexMatrix zz = kron(pauli_z().matrix(), pauli_z().matrix());
  return HermitianOperator(xx + yy + zz);
}

}  // namespace

TEST_CASE("single-qubit pair generates the full su(2)") {
  LieClosure c = generate_lie_algebra(0.5 * pauli_x(), 0.5 * pauli_z());
  CHECK(c.dimension == 3);
  CHECK(c.full_su);
  CHECK(c.converged);
}

TEST_CASE("decoupled two-qubit pair stops at dimension 4") {
  HermitianOperator b(kron(pauli_x().matrix(), ComplexMatrix::identity(2)));
  HermitianOperator c(kron(pauli_z().matrix(), ComplexMatrix::identity(2)) +
                      kron(ComplexMatrix::identity(2), pauli_z().matrix()));
  LieClosure cl = generate_lie_algebra(b, c);
  CHECK(cl.dimension == 4);
  CHECK(!cl.full_su);  // su(4) would need 15
  CHECK(cl.converged);
}

TEST_CASE("identical seeds give a one-dimensional algebra") {
  HermitianOperator b = 0.5 * pauli_x();
  LieClosure c = generate_lie_algebra(b, b);
  CHECK(c.dimension == 1);
  CHECK(c.converged);
}

TEST_CASE("closure basis is anti-Hermitian, traceless and orthonormal") {
  Rng rng(81);
  HermitianOperator b = random_hermitian(3, rng);
  HermitianOperator c = random_hermitian(3, rng);
  LieClosure cl = generate_lie_algebra(b, c);
  for (const auto& x : cl.basis) {
    CHECK(std::abs(x.trace()) < 1e-12);
    ComplexMatrix sum = x.adjoint();
    sum += x;
    CHECK(sum.frobenius_norm() < 1e-12);
  }
  for (std::size_t i = 0; i < cl.basis.size(); ++i)
    for (std::size_t j = 0; j < cl.basis.size(); ++j) {
      double want = i == j ? 1.0 : 0.0;
      CHECK(std::abs(hs_inner(cl.basis[i], cl.basis[j]) - want) < 1e-10);
    }
}

TEST_CASE("closure dimension is invariant under seed order and conjugation") {
  Rng rng(82);
  for (int trial = 0; trial < 3; ++trial) {
    int n = 3 + trial;
    HermitianOperator b = random_hermitian(n, rng);
    HermitianOperator c = random_hermitian(n, rng);
    LieClosure bc = generate_lie_algebra(b, c);
    LieClosure cb = generate_lie_algebra(c, b);
    CHECK(bc.dimension == cb.dimension);

    ComplexMatrix u = random_unitary(n, rng);
    HermitianOperator bu(u * b.matrix() * u.adjoint(), 1e-6);
    HermitianOperator cu(u * c.matrix() * u.adjoint(), 1e-6);
    LieClosure conj = generate_lie_algebra(bu, cu);
    CHECK(conj.dimension == bc.dimension);
  }
}

TEST_CASE("Heisenberg block: compressed pair is controllable on Ran(P0)") {
  HermitianOperator b(kron(pauli_z().matrix(), ComplexMatrix::identity(2)));
  HermitianOperator c = heisenberg_pair();
  // P0 projects onto span{|01>, |10>}
  ComplexMatrix p(4, 4);
  p(1, 1) = 1.0;
  p(2, 2) = 1.0;
  BlockReachability r = block_reachability(b, c, HermitianOperator(p));
  CHECK(r.verdict == BlockVerdict::reachable);
  CHECK(r.block_dim == 2);
  CHECK(r.closure.dimension == 3);
  // compressed operators: B|_P0 ~ +/- sigma_z (eigs -1, 1), C|_P0 = -I + 2 sx
  Eigh eb = eigh(r.b_compressed);
  CHECK(eb.values[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(eb.values[1] == doctest::Approx(1.0).epsilon(1e-10));
  Eigh ec = eigh(r.c_compressed);
  CHECK(ec.values[0] == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(ec.values[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("full-space projector reduces to plain controllability") {
  BlockReachability r = block_reachability(
      0.5 * pauli_x(), 0.5 * pauli_z(), HermitianOperator::identity(2));
  CHECK(r.verdict == BlockVerdict::reachable);
  CHECK(r.closure.dimension == 3);
}

TEST_CASE("projector that fails to commute yields not-applicable") {
  ComplexMatrix p(2, 2);
  p(0, 0) = 1.0;  // |0><0| does not commute with sigma_x
  BlockReachability r =
      block_reachability(0.5 * pauli_x(), 0.5 * pauli_z(), HermitianOperator(p));
  CHECK(r.verdict == BlockVerdict::not_applicable);
  CHECK(r.hyp_residual_b > 1e-10);
}

TEST_CASE("non-idempotent matrix is rejected as a projector") {
  CHECK_THROWS_AS(block_reachability(0.5 * pauli_x(), 0.5 * pauli_z(),
                                     0.5 * HermitianOperator::identity(2)),
                  ValidationError);
}
