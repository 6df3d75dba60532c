#include "qoc/pmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"

namespace qoc {

const char* to_string(ArcLabel l) {
  switch (l) {
    case ArcLabel::bang0: return "bang0";
    case ArcLabel::bang1: return "bang1";
    case ArcLabel::singular: return "singular";
  }
  return "?";
}

HermitianOperator switching_operator(const HermitianOperator& p,
                                     const HermitianOperator& rho) {
  ComplexMatrix s = commutator(p.matrix(), rho.matrix());
  s *= cd{0.0, 1.0};
  return HermitianOperator(std::move(s));
}

PMPAnalysis pmp_records(const ControlProblem& problem, const Schedule& schedule,
                        const GridSpec& grid, double eps_band_rel) {
  Trajectory rho = propagate_state(problem, schedule, grid);
  CostateTrajectory cot = propagate_costate(problem, schedule, grid);
  if (rho.t.size() != cot.t.size())
    throw NumericError("pmp_records: state and costate grids disagree");

  const bool coords_ok = problem.kind() == GeneratorKind::closed ||
                         problem.kind() == GeneratorKind::joint;

  PMPAnalysis out;
  out.has_switching_coords = coords_ok;
  out.records.reserve(rho.t.size());

  const Superoperator* kc = coords_ok ? &problem.k_cost() : nullptr;
  const Superoperator* kb = coords_ok ? &problem.k_driver() : nullptr;

  double pair0 = 0.0;
  for (std::size_t i = 0; i < rho.t.size(); ++i) {
    const auto& v = rho.states[i];
    const auto& p = cot.costates[i];
    double pair = kernels::dot(v.size(), v.data(), p.data());
    if (i == 0) pair0 = pair;
    out.pair_drift = std::max(out.pair_drift, std::abs(pair - pair0));

    PMPRecord rec;
    rec.t = rho.t[i];
    rec.s = rho.s[i];
    std::vector<double> gv = problem.generator(rec.s).apply(v);
    rec.H_value = kernels::dot(p.size(), p.data(), gv.data());
    if (coords_ok) {
      std::vector<double> kcv = kc->apply(v);
      std::vector<double> kbv = kb->apply(v);
      rec.x_C = kernels::dot(p.size(), p.data(), kcv.data());
      rec.x_B = kernels::dot(p.size(), p.data(), kbv.data());
      rec.switching_fn = rec.x_B - rec.x_C;
    } else {
      rec.x_C = rec.x_B = rec.switching_fn =
          std::numeric_limits<double>::quiet_NaN();
    }
    out.records.push_back(rec);
  }

  out.x_b_initial = out.records.front().x_B;
  out.x_c_final = out.records.back().x_C;

  // lambda as the time-mean of the control Hamiltonian
  double mean = 0.0;
  for (const auto& r : out.records) mean += r.H_value;
  mean /= static_cast<double>(out.records.size());
  double resid = 0.0;
  for (const auto& r : out.records)
    resid = std::max(resid, std::abs(r.H_value - mean));

  if (coords_ok) {
    double max_sw = 0.0;
    for (const auto& r : out.records)
      max_sw = std::max(max_sw, std::abs(r.switching_fn));
    double scale = std::max(1.0, std::abs(mean));
    double band = std::max(eps_band_rel * max_sw, 1e-12 * scale);
    out.classification = classify_arcs(out.records, band);
  }
  out.classification.lambda = mean;
  out.classification.lambda_residual = resid;
  return out;
}

namespace {

struct Run {
  int first, last;  // inclusive sample range
  int label;        // -1 bang0, +1 bang1, 0 in-band
};

}  // namespace

ArcClassification classify_arcs(const std::vector<PMPRecord>& records,
                                double eps_band, int min_singular_samples) {
  if (records.empty())
    throw ValidationError("classify_arcs: no records");
  ArcClassification out;
  const int n = static_cast<int>(records.size());

  auto provisional = [&](int i) {
    double f = records[i].switching_fn;
    if (f > eps_band) return +1;
    if (f < -eps_band) return -1;
    return 0;
  };

  std::vector<Run> runs;
  for (int i = 0; i < n; ++i) {
    int l = provisional(i);
    if (!runs.empty() && runs.back().label == l)
      runs.back().last = i;
    else
      runs.push_back({i, i, l});
  }

  // In-band runs too short to count as singular arcs are switch points;
  // absorb them into the neighbouring bang runs, splitting at the sign
  // change of the switching function.
  std::vector<Run> merged;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    Run run = runs[r];
    int len = run.last - run.first + 1;
    bool whole_record_in_band = runs.size() == 1;
    if (run.label == 0 && len < min_singular_samples && !whole_record_in_band) {
      Run* left = merged.empty() ? nullptr : &merged.back();
      bool has_right = r + 1 < runs.size();
      if (left && has_right) {
        // split where |switching_fn| is smallest; the split sample goes to
        // the right run, consistent with the right-continuous s_at()
        int split = run.first;
        double best = std::abs(records[run.first].switching_fn);
        for (int i = run.first; i <= run.last; ++i)
          if (std::abs(records[i].switching_fn) < best) {
            best = std::abs(records[i].switching_fn);
            split = i;
          }
        if (split > run.first) left->last = split - 1;
        runs[r + 1].first = split;
      } else if (left) {
        left->last = run.last;
      } else if (has_right) {
        runs[r + 1].first = run.first;
      } else {
        merged.push_back(run);  // lone short in-band record set
      }
      continue;
    }
    if (!merged.empty() && merged.back().label == run.label)
      merged.back().last = run.last;
    else
      merged.push_back(run);
  }

  const double t0 = records.front().t;
  const double tf = records.back().t;
  auto boundary = [&](int i, int j) {
    return 0.5 * (records[i].t + records[j].t);
  };

  int matches = 0, counted = 0;
  for (std::size_t r = 0; r < merged.size(); ++r) {
    const Run& run = merged[r];
    ArcInterval iv;
    iv.t_start = (r == 0) ? t0 : boundary(merged[r - 1].last, run.first);
    iv.t_end = (r + 1 == merged.size()) ? tf : boundary(run.last, merged[r + 1].first);
    iv.label = run.label > 0   ? ArcLabel::bang1
               : run.label < 0 ? ArcLabel::bang0
                               : ArcLabel::singular;
    out.intervals.push_back(iv);
    for (int i = run.first; i <= run.last; ++i) {
      // switch-point samples sit inside the band and belong to no bang
      if (iv.label != ArcLabel::singular &&
          std::abs(records[i].switching_fn) <= eps_band)
        continue;
      ++counted;
      double s = records[i].s;
      bool ok = iv.label == ArcLabel::singular ||
                (iv.label == ArcLabel::bang0 && s <= 0.5) ||
                (iv.label == ArcLabel::bang1 && s >= 0.5);
      if (ok) ++matches;
    }
  }
  out.schedule_consistency =
      counted ? static_cast<double>(matches) / counted : 1.0;
  return out;
}

Trajectory propagate_switching(const ControlProblem& problem,
                               const Schedule& schedule,
                               const HermitianOperator& s0,
                               const GridSpec& grid) {
  if (problem.kind() != GeneratorKind::closed)
    throw ValidationError(
        "propagate_switching: the switching-operator equation applies to the "
        "closed generator kind only (got " +
        std::string(to_string(problem.kind())) + ")");
  return propagate_observable(problem, schedule, s0, grid);
}

SingularDiagnostics singular_diagnostics(const HermitianOperator& s_op,
                                         const HermitianOperator& b,
                                         const HermitianOperator& c,
                                         double s) {
  ComplexMatrix d = commutator(c.matrix(), b.matrix());
  SingularDiagnostics out;
  // D = [C,B] is anti-Hermitian, so <D,S> is purely imaginary; c1 carries the
  // imaginary component (for the qubit this is the Tr(sigma_y S) condition).
  out.c1 = kernels::zdotc(d.size(), d.data(), s_op.matrix().data()).imag();
  // [C,D] and [B,D] are Hermitian, so these inner products are real.
  ComplexMatrix cdm = commutator(c.matrix(), d);
  ComplexMatrix bdm = commutator(b.matrix(), d);
  out.cd_inner = hs_inner(cdm, s_op.matrix());
  out.bd_inner = hs_inner(bdm, s_op.matrix());
  out.c2 = (1.0 - s) * out.cd_inner + s * out.bd_inner;
  double denom = out.cd_inner - out.bd_inner;
  if (std::abs(denom) > 1e-10) out.s_feedback = out.cd_inner / denom;
  return out;
}

}  // namespace qoc
