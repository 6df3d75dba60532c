#include "qoc/qubit_analytic.hpp"

#include <cmath>

#include "qoc/errors.hpp"
#include "qoc/rng.hpp"

namespace qoc::qubit {

Vec3 rot_x(double t, const Vec3& v) {
  double c = std::cos(t), s = std::sin(t);
  return {v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]};
}

Vec3 rot_z(double t, const Vec3& v) {
  double c = std::cos(t), s = std::sin(t);
  return {c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]};
}

Vec3 rot_mixed(double s, double t, const Vec3& v) {
  double wx = s, wz = 1.0 - s;
  double norm = std::sqrt(wx * wx + wz * wz);
  if (norm == 0.0) return v;
  double nx = wx / norm, nz = wz / norm;
  double th = norm * t;
  double c = std::cos(th), si = std::sin(th);
  // Rodrigues with axis n = (nx, 0, nz)
  double ndv = nx * v[0] + nz * v[2];
  Vec3 cross{-nz * v[1], nz * v[0] - nx * v[2], nx * v[1]};
  return {v[0] * c + cross[0] * si + nx * ndv * (1.0 - c),
          v[1] * c + cross[1] * si,
          v[2] * c + cross[2] * si + nz * ndv * (1.0 - c)};
}

Vec3 bloch_from_density(const HermitianOperator& rho) {
  if (rho.dim() != 2)
    throw ValidationError("bloch_from_density: needs a qubit state");
  return {2.0 * rho.entry(0, 1).real(), -2.0 * rho.entry(0, 1).imag(),
          (rho.entry(0, 0) - rho.entry(1, 1)).real()};
}

HermitianOperator density_from_bloch(const Vec3& v) {
  ComplexMatrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + v[2]);
  m(1, 1) = 0.5 * (1.0 - v[2]);
  m(0, 1) = 0.5 * cd{v[0], -v[1]};
  m(1, 0) = 0.5 * cd{v[0], v[1]};
  return HermitianOperator(std::move(m));
}

namespace {

Vec3 apply_cell(double s, double dt, const Vec3& v) {
  if (s == 0.0) return rot_z(dt, v);
  if (s == 1.0) return rot_x(dt, v);
  return rot_mixed(s, dt, v);
}

}  // namespace

BlochTrajectory bloch_propagate(const Vec3& v0, const Schedule& schedule,
                                int output_points) {
  BlochTrajectory out;
  const double tf = schedule.total_duration();
  if (tf <= 0.0) {
    out.t = {0.0};
    out.s = {schedule.s_at(0.0)};
    out.v = {v0};
    return out;
  }
  auto cells = schedule.constant_cells(0.0);
  int pts = std::max(output_points, 2);
  out.t.reserve(pts);
  out.v.reserve(pts);

  std::size_t cell = 0;
  double cell_start = 0.0;
  Vec3 at_cell_start = v0;  // exact value at the start of the current cell
  for (int i = 0; i < pts; ++i) {
    double t = tf * static_cast<double>(i) / static_cast<double>(pts - 1);
    while (cell + 1 < cells.size() &&
           t > cell_start + cells[cell].second + 1e-15 * tf) {
      at_cell_start = apply_cell(cells[cell].first, cells[cell].second,
                                 at_cell_start);
      cell_start += cells[cell].second;
      ++cell;
    }
    Vec3 v = apply_cell(cells[cell].first, t - cell_start, at_cell_start);
    out.t.push_back(t);
    out.s.push_back(schedule.s_at(t));
    out.v.push_back(v);
  }
  return out;
}

Vec3 bloch_endpoint(const Vec3& v0, const Schedule& schedule) {
  Vec3 v = v0;
  for (auto [s, dt] : schedule.constant_cells(0.0)) v = apply_cell(s, dt, v);
  return v;
}

double bloch_cost(const Vec3& v) { return 0.5 * v[2]; }

OptimalBangBang optimal_bangbang(double t_f) {
  if (!(t_f > 0.0))
    throw ValidationError("optimal_bangbang: t_f must be positive");
  OptimalBangBang out;
  if (t_f < M_PI) {
    out.schedule = Schedule::bangs(0, {0.5 * t_f, 0.5 * t_f});
    out.cost = -0.5 * std::sin(0.5 * t_f) * std::sin(0.5 * t_f);
    out.switch_time = 0.5 * t_f;
    out.padded = false;
    return out;
  }
  out.schedule = Schedule(std::vector<Arc>{BangArc{0.0, M_PI_2},
                                           BangArc{1.0, M_PI_2},
                                           BangArc{0.0, t_f - M_PI}});
  out.cost = -0.5;
  out.switch_time = M_PI_2;
  out.padded = true;
  return out;
}

SignCheckReport small_time_sign_check(const Vec3& v0, int n_schedules,
                                      double t_small, std::uint64_t seed) {
  if (t_small > 0.1)
    throw ValidationError("small_time_sign_check: t_small must be <= 0.1");
  Rng rng(seed);
  SignCheckReport rep;
  rep.n_schedules = n_schedules;
  rep.t_small = t_small;
  rep.min_v3 = 1.0;
  rep.max_v3 = -1.0;
  for (int k = 0; k < n_schedules; ++k) {
    Rng sub = rng.fork(k);
    Schedule sched;
    if (k % 3 == 0) {
      // random bang sequence
      int arcs = 2 + static_cast<int>(sub.uniform() * 4);
      std::vector<double> dur(arcs);
      double sum = 0.0;
      for (double& d : dur) {
        d = 0.05 + sub.uniform();
        sum += d;
      }
      for (double& d : dur) d *= t_small / sum;
      sched = Schedule::bangs(sub.uniform() < 0.5 ? 0 : 1, dur);
    } else {
      int cells = 3 + static_cast<int>(sub.uniform() * 20);
      std::vector<double> s(cells);
      for (double& v : s) v = sub.uniform();
      sched = Schedule::discretized(s, t_small);
    }
    Vec3 v = bloch_endpoint(v0, sched);
    rep.min_v3 = std::min(rep.min_v3, v[2]);
    rep.max_v3 = std::max(rep.max_v3, v[2]);
  }
  return rep;
}

DeltaRecursionReport delta_recursion_check(double r0y, double r0z,
                                           const std::vector<double>& taus,
                                           double tol) {
  if (r0y == 0.0)
    throw ValidationError("delta_recursion_check: r0y must be nonzero");
  DeltaRecursionReport rep;
  const int n_arcs = static_cast<int>(taus.size());
  rep.deltas.resize(n_arcs);
  double prev = 0.0;
  for (int k = 0; k < n_arcs; ++k) {
    rep.deltas[k] = taus[k] - prev;
    prev = rep.deltas[k];
  }

  Vec3 r{0.0, r0y, r0z};
  for (int k = 1; k <= n_arcs; ++k) {
    r = (k % 2 == 1) ? rot_z(taus[k - 1], r) : rot_x(taus[k - 1], r);
    if (k == n_arcs) break;  // the final switch obeys a different condition
    double delta = rep.deltas[k - 1];
    double sign = (k % 2 == 1) ? -1.0 : 1.0;
    double resid = std::abs(sign * std::sin(delta) * r0y - r0z);
    Vec3 want{r0z, std::cos(delta) * r0y, r0z};
    for (int i = 0; i < 3; ++i)
      resid = std::max(resid, std::abs(r[i] - want[i]));
    rep.max_residual = std::max(rep.max_residual, resid);
    if (resid > tol && rep.first_violation == 0) rep.first_violation = k;
  }
  rep.final_arc_residual = std::abs(std::sin(rep.deltas.back()));
  return rep;
}

}  // namespace qoc::qubit
