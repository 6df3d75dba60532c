#include "qoc/arcstats.hpp"

#include <algorithm>
#include <cmath>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"
#include "qoc/parallel.hpp"

namespace qoc {

double XbSignal::eval(double t) const {
  return constant + kernels::trig_eval(freq.size(), amp_cos.data(),
                                       amp_sin.data(), freq.data(), t);
}

XbSignal xb_signal(const HermitianOperator& s0, const HermitianOperator& b,
                   const HermitianOperator& c) {
  if (s0.dim() != b.dim() || s0.dim() != c.dim())
    throw ValidationError("xb_signal: dimension mismatch");
  const int d = c.dim();
  Eigh e = eigh(c.matrix());
  ComplexMatrix be = e.vectors.adjoint() * b.matrix() * e.vectors;
  ComplexMatrix se = e.vectors.adjoint() * s0.matrix() * e.vectors;

  XbSignal sig;
  // T_mn = B'_{nm} S'_{mn} with frequency w_mn = E_m - E_n; the (m,n)/(n,m)
  // pair combines into 2 Re T cos(w t) + 2 Im T sin(w t).
  for (int m = 0; m < d; ++m) sig.constant += (be(m, m) * se(m, m)).real();
  sig.min_freq = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = m + 1; n < d; ++n) {
      cd term = be(n, m) * se(m, n);
      double w = e.values[m] - e.values[n];
      if (w == 0.0) {
        sig.constant += 2.0 * term.real();
        continue;
      }
      sig.amp_cos.push_back(2.0 * term.real());
      sig.amp_sin.push_back(2.0 * term.imag());
      sig.freq.push_back(w);
      double aw = std::abs(w);
      sig.max_freq = std::max(sig.max_freq, aw);
      if (sig.min_freq == 0.0 || aw < sig.min_freq) sig.min_freq = aw;
    }
  return sig;
}

std::vector<double> xb_series(const XbSignal& sig,
                              const std::vector<double>& t_grid) {
  std::vector<double> out(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) out[i] = sig.eval(t_grid[i]);
  return out;
}

std::optional<double> first_crossing(const XbSignal& sig, double level,
                                     double horizon, double scan_dt) {
  if (!std::isfinite(level))
    throw ValidationError("first_crossing: level must be finite");
  if (sig.max_freq == 0.0 || horizon <= 0.0) return std::nullopt;
  if (scan_dt <= 0.0) scan_dt = (2.0 * M_PI / sig.max_freq) / 32.0;

  double t0 = 0.0;
  double f0 = sig.eval(0.0) - level;
  for (double t = scan_dt; t <= horizon + scan_dt; t += scan_dt) {
    double f = sig.eval(t) - level;
    if (f == 0.0) return t;
    if (f0 != 0.0 && std::signbit(f) != std::signbit(f0)) {
      double lo = t0, hi = t;
      double flo = f0;
      while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        double fm = sig.eval(mid) - level;
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    t0 = t;
    f0 = f;
  }
  return std::nullopt;
}

namespace {

HermitianOperator random_traceless_unit(int dim, Rng& rng) {
  HermitianOperator x = random_hermitian(dim, rng);
  ComplexMatrix m = x.matrix();
  cd shift = m.trace() / static_cast<double>(dim);
  for (int i = 0; i < dim; ++i) m(i, i) -= shift;
  HermitianOperator out{std::move(m)};
  double n = out.norm();
  return (1.0 / n) * out;
}

HermitianOperator costate_style_s0(int n_qubits, const HermitianOperator& b,
                                   Rng& rng) {
  HermitianOperator rho0 = ground_state_projector(b);
  HermitianOperator p0 = random_hermitian(1 << n_qubits, rng);
  ComplexMatrix s = commutator(p0.matrix(), rho0.matrix());
  s *= cd{0.0, 1.0};
  HermitianOperator out{std::move(s)};
  double n = out.norm();
  if (n == 0.0) return random_traceless_unit(1 << n_qubits, rng);
  return (1.0 / n) * out;
}

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  double pos = q * (sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

ShorteningTable shortening_experiment(const CrossingExperiment& exp) {
  if (exp.instances_per_n < 1)
    throw ValidationError("shortening_experiment: instances_per_n must be >= 1");
  if (!(exp.lambda_fraction > 0.0 && exp.lambda_fraction < 1.0))
    throw ValidationError("shortening_experiment: lambda_fraction in (0,1)");

  ShorteningTable table;
  Rng master(exp.seed);

  for (int n = exp.n_min; n <= exp.n_max; ++n) {
    std::vector<double> crossings(exp.instances_per_n,
                                  std::numeric_limits<double>::quiet_NaN());
    parallel_for(
        exp.instances_per_n,
        [&](int k) {
          Rng rng = master.fork(static_cast<std::uint64_t>(n) * 1000003u + k);
          int dim = 1 << n;
          std::vector<double> h(n);
          for (double& x : h) x = exp.disorder.h_std * rng.normal();
          std::vector<std::array<double, 3>> couplings;
          for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
              couplings.push_back({static_cast<double>(i),
                                   static_cast<double>(j),
                                   exp.disorder.j_std * rng.normal()});
          HermitianOperator c_op = ising_hamiltonian(n, h, couplings);
          HermitianOperator b_op = transverse_driver(n);

          HermitianOperator s0 =
              exp.s0_policy == CrossingExperiment::S0Policy::from_random_costate
                  ? costate_style_s0(n, b_op, rng)
                  : random_traceless_unit(dim, rng);

          const HermitianOperator& evolve_under = exp.swap_roles ? b_op : c_op;
          const HermitianOperator& observe = exp.swap_roles ? c_op : b_op;
          XbSignal sig = xb_signal(s0, observe, evolve_under);

          double horizon = exp.horizon_cap;
          if (sig.min_freq > 0.0)
            horizon = std::min(horizon, 10.0 * 2.0 * M_PI / sig.min_freq);

          // level from the signal range on a coarse grid over the horizon
          double max_abs = std::abs(sig.eval(0.0));
          for (int i = 1; i <= 4096; ++i)
            max_abs = std::max(max_abs,
                               std::abs(sig.eval(horizon * i / 4096.0)));
          double level = exp.lambda_fraction * max_abs;

          auto hit = first_crossing(sig, level, horizon);
          if (hit) crossings[k] = *hit;
        },
        exp.threads);

    ShorteningRow row;
    row.n_qubits = n;
    row.instances = exp.instances_per_n;
    std::vector<double> finite;
    for (double x : crossings) {
      if (std::isnan(x))
        ++row.horizon_hits;
      else
        finite.push_back(x);
    }
    std::sort(finite.begin(), finite.end());
    row.median_dt = quantile(finite, 0.5);
    row.q25 = quantile(finite, 0.25);
    row.q75 = quantile(finite, 0.75);
    table.rows.push_back(row);
  }

  // Spearman rank correlation of median against n (n is already sorted)
  const int m = static_cast<int>(table.rows.size());
  if (m >= 2) {
    std::vector<int> rank(m);
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return table.rows[a].median_dt < table.rows[b].median_dt;
    });
    for (int r = 0; r < m; ++r) rank[idx[r]] = r;
    double d2 = 0.0;
    for (int i = 0; i < m; ++i) {
      double diff = rank[i] - i;
      d2 += diff * diff;
    }
    table.rank_correlation =
        1.0 - 6.0 * d2 / (static_cast<double>(m) * (m * m - 1));
  }
  return table;
}

CommensurateReport commensurate_period_check(const HermitianOperator& c_ising,
                                             const HermitianOperator& b,
                                             const HermitianOperator& s0) {
  CommensurateReport rep;
  XbSignal sig = xb_signal(s0, b, c_ising);
  if (sig.freq.empty()) return rep;  // constant signal, nothing to check

  double base = sig.min_freq;
  for (double w : sig.freq) {
    double ratio = std::abs(w) / base;
    if (std::abs(ratio - std::lround(ratio)) > 1e-8 * (1.0 + ratio))
      return rep;  // incommensurate spectrum
  }
  rep.applicable = true;
  rep.base_gap = base;
  rep.period = 2.0 * M_PI / base;
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    double t = rep.period * i / samples;
    rep.residual =
        std::max(rep.residual, std::abs(sig.eval(t + rep.period) - sig.eval(t)));
  }
  return rep;
}

}  // namespace qoc
