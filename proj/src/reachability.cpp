#include "qoc/reachability.hpp"

#include <cmath>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"

namespace qoc {

const char* to_string(BlockVerdict v) {
  switch (v) {
    case BlockVerdict::reachable: return "reachable";
    case BlockVerdict::not_reachable: return "not reachable";
    case BlockVerdict::not_applicable: return "not applicable";
  }
  return "?";
}

namespace {

// real inner product on the anti-Hermitian matrices, Re Tr(A^dag B)
double re_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return kernels::zdotc(a.size(), a.data(), b.data()).real();
}

void project_out_identity(ComplexMatrix& x) {
  cd tr = x.trace();
  if (tr == cd{0.0, 0.0}) return;
  cd shift = tr / static_cast<double>(x.rows());
  for (int i = 0; i < x.rows(); ++i) x(i, i) -= shift;
}

// Orthogonalize x against the basis (twice, for stability); returns the
// residual norm. x is left normalized when the residual is nonzero.
double orthogonalize(ComplexMatrix& x, const std::vector<ComplexMatrix>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : basis) {
      double coef = re_inner(e, x);
      if (coef != 0.0)
        kernels::zaxpy(x.size(), cd{-coef, 0.0}, e.data(), x.data());
    }
  }
  double norm = x.frobenius_norm();
  if (norm > 0.0) x *= cd{1.0 / norm, 0.0};
  return norm;
}

}  // namespace

LieClosure generate_lie_algebra(const HermitianOperator& b,
                                const HermitianOperator& c, int max_depth,
                                double rank_tol) {
  if (b.dim() != c.dim())
    throw ValidationError("generate_lie_algebra: dimension mismatch");
  const int d = b.dim();
  const int full_dim = d * d - 1;
  if (max_depth <= 0) max_depth = 2 * d * d;

  LieClosure out;
  auto try_add = [&](ComplexMatrix x) -> bool {
    project_out_identity(x);
    double norm = x.frobenius_norm();
    if (norm < rank_tol) return false;
    x *= cd{1.0 / norm, 0.0};
    if (orthogonalize(x, out.basis) <= rank_tol) return false;
    out.basis.push_back(std::move(x));
    return true;
  };

  // seeds i B, i C
  ComplexMatrix ib = b.matrix();
  ib *= cd{0.0, 1.0};
  ComplexMatrix ic = c.matrix();
  ic *= cd{0.0, 1.0};
  std::size_t gen_begin = 0;
  try_add(std::move(ib));
  try_add(std::move(ic));
  std::size_t gen_end = out.basis.size();

  while (gen_begin < gen_end && out.depth_reached < max_depth &&
         static_cast<int>(out.basis.size()) < full_dim) {
    ++out.depth_reached;
    // bracket the newest generation against everything seen so far
    for (std::size_t i = gen_begin; i < gen_end; ++i)
      for (std::size_t j = 0; j < gen_end; ++j) {
        if (j >= i && j >= gen_begin) continue;  // avoid duplicates within the generation
        try_add(commutator(out.basis[i], out.basis[j]));
        if (static_cast<int>(out.basis.size()) >= full_dim) break;
      }
    gen_begin = gen_end;
    gen_end = out.basis.size();
  }

  out.dimension = static_cast<int>(out.basis.size());
  out.full_su = out.dimension >= full_dim;
  out.converged = out.full_su || gen_begin == gen_end ||
                  out.depth_reached < max_depth;
  return out;
}

BlockReachability block_reachability(const HermitianOperator& b,
                                     const HermitianOperator& c,
                                     const HermitianOperator& p0,
                                     int max_depth) {
  if (b.dim() != c.dim() || b.dim() != p0.dim())
    throw ValidationError("block_reachability: dimension mismatch");
  ComplexMatrix p = p0.matrix();
  ComplexMatrix p2 = p * p;
  p2 -= p;
  if (p2.frobenius_norm() > 1e-12 * (1.0 + p.frobenius_norm()))
    throw ValidationError("block_reachability: P0 is not idempotent");

  BlockReachability out;
  out.hyp_residual_b = commutator(b.matrix(), p).frobenius_norm();
  out.hyp_residual_c = commutator(c.matrix(), p).frobenius_norm();
  out.block_dim = static_cast<int>(std::lround(p.trace().real()));
  if (out.hyp_residual_b > 1e-10 || out.hyp_residual_c > 1e-10) {
    out.verdict = BlockVerdict::not_applicable;
    return out;
  }
  if (out.block_dim < 1)
    throw ValidationError("block_reachability: P0 has rank zero");

  // orthonormal basis of Ran(P0): eigenvectors with eigenvalue ~ 1
  Eigh e = eigh(p);
  const int d = b.dim();
  ComplexMatrix q(d, out.block_dim);
  int col = 0;
  for (int k = 0; k < d; ++k) {
    if (e.values[k] > 0.5) {
      if (col >= out.block_dim)
        throw NumericError("block_reachability: projector rank mismatch");
      for (int i = 0; i < d; ++i) q(i, col) = e.vectors(i, k);
      ++col;
    }
  }
  if (col != out.block_dim)
    throw NumericError("block_reachability: projector rank mismatch");

  out.b_compressed = q.adjoint() * b.matrix() * q;
  out.c_compressed = q.adjoint() * c.matrix() * q;
  out.closure = generate_lie_algebra(HermitianOperator(out.b_compressed),
                                     HermitianOperator(out.c_compressed),
                                     max_depth);
  out.verdict = out.closure.full_su ? BlockVerdict::reachable
                                    : BlockVerdict::not_reachable;
  return out;
}

}  // namespace qoc
