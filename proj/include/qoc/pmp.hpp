#pragma once

#include <optional>
#include <vector>

#include "qoc/dynamics.hpp"

namespace qoc {

// Per-sample PMP bookkeeping. x_C = <p, K_C rho>, x_B = <p, K_B rho> (with
// C (x) I, B (x) I in the joint case); H_value = <p, L(s) rho>. For redfield
// and game kinds only H_value is meaningful and the x fields are NaN.
struct PMPRecord {
  double t;
  double s;
  double x_C;
  double x_B;
  double H_value;
  double switching_fn;  // x_B - x_C
};

enum class ArcLabel { bang0, bang1, singular };

const char* to_string(ArcLabel l);

struct ArcInterval {
  double t_start;
  double t_end;
  ArcLabel label;
};

struct ArcClassification {
  std::vector<ArcInterval> intervals;  // partition of [0, t_f]
  double lambda = 0.0;
  double lambda_residual = 0.0;
  // fraction of samples whose schedule value agrees with the sample's label
  double schedule_consistency = 1.0;
};

struct PMPAnalysis {
  std::vector<PMPRecord> records;
  ArcClassification classification;
  double pair_drift = 0.0;   // max_t |<p,rho>(t) - <p,rho>(0)|
  double x_b_initial = 0.0;  // x_B(0)
  double x_c_final = 0.0;    // x_C(t_f)
  bool has_switching_coords = false;  // closed/joint only
};

// Propagates state and costate on a shared grid and assembles records plus
// the arc classification. eps_band_rel scales the singular detection band by
// max_t |switching_fn|.
PMPAnalysis pmp_records(const ControlProblem& problem, const Schedule& schedule,
                        const GridSpec& grid = {}, double eps_band_rel = 1e-6);

// Classification with an absolute band; singular intervals require at least
// `min_singular_samples` consecutive in-band samples, shorter in-band runs
// are treated as switch points and absorbed into the neighbouring bangs.
ArcClassification classify_arcs(const std::vector<PMPRecord>& records,
                                double eps_band, int min_singular_samples = 5);

// S = i [p, rho]
HermitianOperator switching_operator(const HermitianOperator& p,
                                     const HermitianOperator& rho);

// Integrates dS/dt = K_H S (closed systems only; throws ValidationError for
// open kinds).
Trajectory propagate_switching(const ControlProblem& problem,
                               const Schedule& schedule,
                               const HermitianOperator& s0,
                               const GridSpec& grid = {});

// Singular-arc conditions. With D = [C,B]:
//   c1 = <[C,B], S>              (vanishes on singular arcs)
//   c2 = (1-s) <[C,D], S> + s <[B,D], S>
//   s_feedback = <[C,D],S> / (<[C,D],S> - <[B,D],S>) when the denominator
//   magnitude exceeds 1e-10.
struct SingularDiagnostics {
  double c1 = 0.0;
  double c2 = 0.0;
  double cd_inner = 0.0;  // <[C,D], S>
  double bd_inner = 0.0;  // <[B,D], S>
  std::optional<double> s_feedback;
};

SingularDiagnostics singular_diagnostics(const HermitianOperator& s_op,
                                         const HermitianOperator& b,
                                         const HermitianOperator& c,
                                         double s = 0.5);

}  // namespace qoc
