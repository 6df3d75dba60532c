#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qoc/operators.hpp"

namespace qoc {

struct OptimizationResult;  // optimize.hpp

// Damped-exponential environment correlation G(t) = g e^{-t/tau_B} e^{-i w0 t}.
struct CorrelationSpec {
  double g = 0.0;
  double tau_B = 1.0;
  double omega0 = 0.0;
  double t_max = std::numeric_limits<double>::infinity();

  // int_0^{t_max} G(r) e^{-i w r} dr, closed form.
  cd half_fourier(double omega) const;
};

// Exact system+environment model evolving under K_{H_tot}.
struct JointModel {
  HermitianOperator B, C;  // system operators, dim n_S
  std::vector<std::pair<HermitianOperator, HermitianOperator>> couplings;  // (S_a, E_a)
  HermitianOperator H_E;
  HermitianOperator rho_E;

  int sys_dim() const { return B.dim(); }
  int env_dim() const { return H_E.dim(); }
  int joint_dim() const { return sys_dim() * env_dim(); }

  HermitianOperator interaction() const;  // sum_a S_a (x) E_a on the joint space
  HermitianOperator h_total(double s) const;
  void validate(int dim_cap = 64) const;
};

// Adiabatic Redfield model: L = K_{H_S} + D with analytic kernel integrals.
struct RedfieldModel {
  HermitianOperator B, C;
  std::vector<HermitianOperator> couplings;           // S_a
  std::vector<std::vector<CorrelationSpec>> kernels;  // G_{ab}

  void validate() const;
};

// Spectral density gamma(omega) >= 0 for the GAME generator.
struct SpectralDensity {
  enum class Kind { constant, ohmic };
  Kind kind = Kind::constant;
  double value = 1.0;                          // constant
  double eta = 1.0, beta = 1.0, omega_c = 10;  // ohmic: eta*w*e^{-|w|/wc}/(1-e^{-beta w})

  double operator()(double omega) const;
};

struct GAMEModel {
  HermitianOperator B, C;
  std::vector<HermitianOperator> couplings;  // S_a
  SpectralDensity gamma;

  void validate() const;
};

// --- Generators (coordinatized, dim = system or joint Hilbert dimension) ---

Superoperator joint_liouvillian(const JointModel& m, double s);

// W_{ab} = int_0^{t_max} G_{ab}(r) S_b(-r) dr in the instantaneous H_S(s)
// eigenbasis; D rho = sum_ab [W_ab rho, S_a] + [S_a, rho W_ab^dag].
std::vector<std::vector<ComplexMatrix>> redfield_w_matrices(
    const RedfieldModel& m, double s);
Superoperator redfield_dissipator(const RedfieldModel& m, double s);
Superoperator redfield_generator(const RedfieldModel& m, double s);
Superoperator redfield_adjoint_dissipator(const RedfieldModel& m, double s);
// D^dag X applied directly (no coordinatization round trip).
ComplexMatrix redfield_adjoint_apply(const RedfieldModel& m, double s,
                                     const ComplexMatrix& x);

// L_a = S_a o sqrt(gamma) in the instantaneous eigenbasis (Hadamard product).
// Throws ValidationError naming the offending Bohr frequency if gamma < 0.
std::vector<ComplexMatrix> game_jump_operators(const GAMEModel& m, double s);
Superoperator game_dissipator(const GAMEModel& m, double s);
Superoperator game_generator(const GAMEModel& m, double s);
Superoperator game_adjoint_dissipator(const GAMEModel& m, double s);
ComplexMatrix game_adjoint_apply(const GAMEModel& m, double s,
                                 const ComplexMatrix& x);

// --- Endpoint-structure theorem checks -------------------------------------

enum class Verdict { holds, violated, not_applicable };

struct HypothesisCheck {
  std::string name;
  double residual = 0.0;
  bool satisfied = false;
};

struct OpenTheoremReport {
  std::vector<HypothesisCheck> hypotheses;
  double lambda = 0.0;
  bool lambda_positive = false;
  Verdict final_arc = Verdict::not_applicable;    // joint: last arc is bang1
  Verdict initial_arc = Verdict::not_applicable;  // joint: first arc is bang0
  Verdict s_tf_one = Verdict::not_applicable;     // redfield: s(t_f) = 1
  std::string summary;
};

class ControlProblem;  // dynamics.hpp

// Verifies the commutator hypotheses of the endpoint theorems on `problem`'s
// model and checks the predicted structure on an optimizer result.
OpenTheoremReport open_theorem_checks(const ControlProblem& problem,
                                      const OptimizationResult& result);

}  // namespace qoc
