#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qoc/operators.hpp"

namespace qoc {

// x_B(dt) = Tr(B e^{-i dt C} S0 e^{i dt C}) in spectral-resolution form: a
// constant plus cos/sin pairs over Bohr gaps of C (terms grouped so the
// evaluation is manifestly real).
struct XbSignal {
  double constant = 0.0;
  std::vector<double> amp_cos;
  std::vector<double> amp_sin;
  std::vector<double> freq;  // positive Bohr gaps
  double max_freq = 0.0;
  double min_freq = 0.0;  // smallest nonzero gap (0 if none)

  double eval(double t) const;
};

XbSignal xb_signal(const HermitianOperator& s0, const HermitianOperator& b,
                   const HermitianOperator& c);

std::vector<double> xb_series(const XbSignal& sig,
                              const std::vector<double>& t_grid);

// First t > 0 with x_B(t) = level: sign-change bracketing on a grid of step
// scan_dt (default resolves the fastest oscillation), then bisection to 1e-10.
std::optional<double> first_crossing(const XbSignal& sig, double level,
                                     double horizon, double scan_dt = 0.0);

struct IsingDisorderSpec {
  double h_std = 1.0;
  double j_std = 1.0;
};

struct CrossingExperiment {
  int n_min = 2;
  int n_max = 5;
  int instances_per_n = 100;
  IsingDisorderSpec disorder;
  enum class S0Policy { from_random_costate, random_traceless };
  S0Policy s0_policy = S0Policy::from_random_costate;
  double lambda_fraction = 0.2;  // level as a fraction of max |x_B|
  std::uint64_t seed = 0;
  double horizon_cap = 1e4;
  bool swap_roles = false;  // analyse the s == 1 arc with B and C interchanged
  int threads = 0;
};

struct ShorteningRow {
  int n_qubits = 0;
  double median_dt = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  int horizon_hits = 0;  // instances with no crossing before the horizon
  int instances = 0;
};

struct ShorteningTable {
  std::vector<ShorteningRow> rows;
  double rank_correlation = 0.0;  // Spearman correlation of median vs n
};

ShorteningTable shortening_experiment(const CrossingExperiment& exp);

// For a commensurate spectrum (all Bohr gaps integer multiples of a base
// unit) x_B is periodic with period 2 pi / base; reports the residual
// max_t |x_B(t + period) - x_B(t)| over one period.
struct CommensurateReport {
  bool applicable = false;
  double base_gap = 0.0;
  double period = 0.0;
  double residual = 0.0;
};

CommensurateReport commensurate_period_check(const HermitianOperator& c_ising,
                                             const HermitianOperator& b,
                                             const HermitianOperator& s0);

}  // namespace qoc
