#include <cmath>
#include <sstream>

#include "qoc/dynamics.hpp"
#include "qoc/opensys.hpp"
#include "qoc/optimize.hpp"

namespace qoc {

namespace {

HypothesisCheck commutator_hypothesis(const std::string& name,
                                      const ComplexMatrix& a,
                                      const ComplexMatrix& b,
                                      double tol = 1e-12) {
  HypothesisCheck h;
  h.name = name;
  h.residual = commutator(a, b).frobenius_norm();
  h.satisfied = h.residual < tol;
  return h;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::not_applicable: return "not applicable";
  }
  return "?";
}

}  // namespace

OpenTheoremReport open_theorem_checks(const ControlProblem& problem,
                                      const OptimizationResult& result) {
  OpenTheoremReport rep;
  rep.lambda = result.lambda;
  rep.lambda_positive = result.lambda > 1e-6;

  const auto& intervals = result.certificate.classification.intervals;

  if (problem.kind() == GeneratorKind::joint) {
    const JointModel& m = *problem.joint_model();
    ComplexMatrix h_i = m.interaction().matrix();

    HypothesisCheck final_hyp = commutator_hypothesis(
        "[H_I, C (x) I] = 0", h_i, problem.cost_op().matrix());
    rep.hypotheses.push_back(final_hyp);
    HypothesisCheck env_stat = commutator_hypothesis(
        "[rho_E, H_E] = 0", m.rho_E.matrix(), m.H_E.matrix());
    rep.hypotheses.push_back(env_stat);
    ComplexMatrix joint0 = kron(problem.rho0().matrix(), m.rho_E.matrix());
    HypothesisCheck int_fix =
        commutator_hypothesis("[H_I, rho0 (x) rho_E] = 0", h_i, joint0);
    rep.hypotheses.push_back(int_fix);
    HypothesisCheck drv_fix = commutator_hypothesis(
        "[B, rho0] = 0", problem.B().matrix(), problem.rho0().matrix());
    rep.hypotheses.push_back(drv_fix);

    if (final_hyp.satisfied && rep.lambda_positive && !intervals.empty()) {
      bool ok = intervals.back().label == ArcLabel::bang1 &&
                intervals.back().t_end > intervals.back().t_start;
      rep.final_arc = ok ? Verdict::holds : Verdict::violated;
    }
    if (env_stat.satisfied && int_fix.satisfied && drv_fix.satisfied &&
        rep.lambda_positive && !intervals.empty()) {
      bool ok = intervals.front().label == ArcLabel::bang0 &&
                intervals.front().t_end > intervals.front().t_start;
      rep.initial_arc = ok ? Verdict::holds : Verdict::violated;
    }
  } else if (problem.kind() == GeneratorKind::redfield) {
    const RedfieldModel& m = *problem.redfield_model();
    bool all_commute = true;
    for (std::size_t a = 0; a < m.couplings.size(); ++a) {
      HypothesisCheck h = commutator_hypothesis(
          "[S_" + std::to_string(a) + ", C] = 0", m.couplings[a].matrix(),
          problem.C().matrix());
      all_commute = all_commute && h.satisfied;
      rep.hypotheses.push_back(std::move(h));
    }
    if (all_commute && rep.lambda_positive) {
      double tf = result.schedule.total_duration();
      double s_end = result.schedule.s_at(tf);
      rep.s_tf_one = std::abs(s_end - 1.0) <= 1e-3 ? Verdict::holds
                                                   : Verdict::violated;
    }
  }

  std::ostringstream os;
  os << "kind=" << to_string(problem.kind()) << " lambda=" << rep.lambda
     << (rep.lambda_positive ? " (>0)" : " (not >0)");
  os << "; final_arc=" << verdict_name(rep.final_arc);
  os << "; initial_arc=" << verdict_name(rep.initial_arc);
  os << "; s(t_f)=1: " << verdict_name(rep.s_tf_one);
  rep.summary = os.str();
  return rep;
}

}  // namespace qoc
