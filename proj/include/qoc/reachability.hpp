#pragma once

#include <vector>

#include "qoc/operators.hpp"

namespace qoc {

// Dynamical Lie algebra generated by {iB, iC} under iterated brackets, with
// the identity component projected out (global phase is irrelevant, so the
// reference count for full controllability is dim su(d) = d^2 - 1).
struct LieClosure {
  std::vector<ComplexMatrix> basis;  // orthonormal anti-Hermitian elements
  int dimension = 0;
  int depth_reached = 0;
  bool converged = false;  // false: max_depth hit, dimension is a lower bound
  bool full_su = false;    // dimension == d^2 - 1
};

// max_depth <= 0 selects the default cap 2 d^2.
LieClosure generate_lie_algebra(const HermitianOperator& b,
                                const HermitianOperator& c, int max_depth = 0,
                                double rank_tol = 1e-10);

enum class BlockVerdict { reachable, not_reachable, not_applicable };

const char* to_string(BlockVerdict v);

struct BlockReachability {
  BlockVerdict verdict = BlockVerdict::not_applicable;
  double hyp_residual_b = 0.0;  // ||[B, P0]||
  double hyp_residual_c = 0.0;  // ||[C, P0]||
  int block_dim = 0;            // rank of P0
  LieClosure closure;           // closure of the compressed pair
  ComplexMatrix b_compressed;
  ComplexMatrix c_compressed;
};

// Requires [B,P0] = [C,P0] = 0 (within 1e-10) and P0 an orthogonal projector;
// compresses B and C to Ran(P0) and reports whether the compressed pair
// generates the full su(d0).
BlockReachability block_reachability(const HermitianOperator& b,
                                     const HermitianOperator& c,
                                     const HermitianOperator& p0,
                                     int max_depth = 0);

}  // namespace qoc
