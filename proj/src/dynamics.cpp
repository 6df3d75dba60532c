#include "qoc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include "qoc/errors.hpp"
#include "qoc/kernels.hpp"

namespace qoc {

const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::closed: return "closed";
    case GeneratorKind::joint: return "joint";
    case GeneratorKind::redfield: return "redfield";
    case GeneratorKind::game: return "game";
  }
  return "?";
}

namespace {

std::uint64_t double_bits(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof(u));
  return u;
}

void validate_density(const HermitianOperator& rho, const char* what) {
  if (std::abs(rho.trace() - 1.0) > 1e-10)
    throw ValidationError(std::string(what) + ": trace != 1 (got " +
                          std::to_string(rho.trace()) + ")");
  Eigh e = eigh(rho.matrix());
  if (e.values.front() < -1e-10)
    throw ValidationError(std::string(what) + ": negative eigenvalue " +
                          std::to_string(e.values.front()));
}

}  // namespace

void ControlProblem::init() {
  if (b_.dim() != c_.dim())
    throw ValidationError("ControlProblem: B and C dimensions differ");
  if (rho0_.dim() != b_.dim())
    throw ValidationError("ControlProblem: rho0 dimension differs from B");
  validate_density(rho0_, "ControlProblem rho0");

  bc_commute_ = commutator(b_.matrix(), c_.matrix()).frobenius_norm() < 1e-12;
  driver_fixes_init_ =
      commutator(b_.matrix(), rho0_.matrix()).frobenius_norm() < 1e-12;

  if (kind_ == GeneratorKind::joint) {
    joint_->validate();
    validate_density(joint_->rho_E, "JointModel rho_E");
    const int ne = joint_->env_dim();
    cost_op_ = HermitianOperator(kron(c_.matrix(), ComplexMatrix::identity(ne)));
    driver_full_ = HermitianOperator(kron(b_.matrix(), ComplexMatrix::identity(ne)));
    init_ = HermitianOperator(kron(rho0_.matrix(), joint_->rho_E.matrix()));
  } else {
    cost_op_ = c_;
    driver_full_ = b_;
    init_ = rho0_;
  }
}

ControlProblem ControlProblem::closed(HermitianOperator B, HermitianOperator C,
                                      HermitianOperator rho0) {
  ControlProblem p;
  p.kind_ = GeneratorKind::closed;
  p.b_ = std::move(B);
  p.c_ = std::move(C);
  p.rho0_ = std::move(rho0);
  p.init();
  return p;
}

ControlProblem ControlProblem::joint(JointModel model, HermitianOperator rho0) {
  ControlProblem p;
  p.kind_ = GeneratorKind::joint;
  p.b_ = model.B;
  p.c_ = model.C;
  p.rho0_ = std::move(rho0);
  p.joint_ = std::make_shared<const JointModel>(std::move(model));
  p.init();
  return p;
}

ControlProblem ControlProblem::redfield(RedfieldModel model, HermitianOperator rho0) {
  ControlProblem p;
  p.kind_ = GeneratorKind::redfield;
  p.b_ = model.B;
  p.c_ = model.C;
  p.rho0_ = std::move(rho0);
  model.validate();
  p.redfield_ = std::make_shared<const RedfieldModel>(std::move(model));
  p.init();
  return p;
}

ControlProblem ControlProblem::game(GAMEModel model, HermitianOperator rho0) {
  ControlProblem p;
  p.kind_ = GeneratorKind::game;
  p.b_ = model.B;
  p.c_ = model.C;
  p.rho0_ = std::move(rho0);
  model.validate();
  p.game_ = std::make_shared<const GAMEModel>(std::move(model));
  p.init();
  return p;
}

HermitianOperator ControlProblem::hamiltonian_at(double s) const {
  if (!(s >= 0.0 && s <= 1.0))
    throw ValidationError("hamiltonian_at: s = " + std::to_string(s) +
                          " outside [0,1]");
  HermitianOperator h = c_;
  HermitianOperator diff = b_;
  diff -= c_;
  diff *= s;
  h += diff;
  return h;
}

const Superoperator& ControlProblem::generator(double s) const {
  std::uint64_t key = double_bits(s);
  {
    std::lock_guard<std::mutex> lock(caches_->mutex);
    auto it = caches_->gen.find(key);
    if (it != caches_->gen.end()) return *it->second;
  }
  std::shared_ptr<const Superoperator> built;
  switch (kind_) {
    case GeneratorKind::closed:
      built = std::make_shared<const Superoperator>(
          commutator_superop(hamiltonian_at(s)));
      break;
    case GeneratorKind::joint:
      built = std::make_shared<const Superoperator>(joint_liouvillian(*joint_, s));
      break;
    case GeneratorKind::redfield:
      built = std::make_shared<const Superoperator>(redfield_generator(*redfield_, s));
      break;
    case GeneratorKind::game:
      built = std::make_shared<const Superoperator>(game_generator(*game_, s));
      break;
  }
  std::lock_guard<std::mutex> lock(caches_->mutex);
  auto [it, inserted] = caches_->gen.emplace(key, std::move(built));
  return *it->second;
}

const Superoperator& ControlProblem::k_cost() const {
  std::lock_guard<std::mutex> lock(caches_->mutex);
  if (!caches_->k_cost)
    caches_->k_cost =
        std::make_shared<const Superoperator>(commutator_superop(cost_op_));
  return *caches_->k_cost;
}

const Superoperator& ControlProblem::k_driver() const {
  std::lock_guard<std::mutex> lock(caches_->mutex);
  if (!caches_->k_driver)
    caches_->k_driver =
        std::make_shared<const Superoperator>(commutator_superop(driver_full_));
  return *caches_->k_driver;
}

HermitianOperator Trajectory::state_at(int i) const {
  return decoordinatize(states[i], dim);
}
double Trajectory::trace_at(int i) const {
  // identity coordinate is the last basis index
  return states[i].back() * std::sqrt(static_cast<double>(dim));
}
double Trajectory::purity_at(int i) const {
  return kernels::nrm2sq(states[i].size(), states[i].data());
}
double Trajectory::min_eig_at(int i) const {
  Eigh e = eigh(decoordinatize_matrix(states[i], dim));
  return e.values.front();
}

HermitianOperator CostateTrajectory::costate_at(int i) const {
  return decoordinatize(costates[i], dim);
}

namespace {

struct Cell {
  double t0, t1, s;
};

// Flattened constant-control cells plus the merged event grid (cell
// boundaries and output times).
struct Walk {
  std::vector<Cell> cells;
  std::vector<double> events;      // strictly increasing, spans [0, tf]
  std::vector<int> output_event;   // event index of each output time
  std::vector<double> output_t;
  std::vector<double> output_s;
};

Walk build_walk(const ControlProblem& problem, const Schedule& schedule,
                const GridSpec& grid) {
  (void)problem;
  Walk w;
  const double tf = schedule.total_duration();
  const int pts = std::max(grid.output_points, 2);
  if (tf <= 0.0) {
    w.output_t = {0.0};
    w.output_s = {schedule.s_at(0.0)};
    w.output_event = {0};
    w.events = {0.0};
    return w;
  }

  auto cells = schedule.constant_cells(grid.max_step_frac * tf);
  double t = 0.0;
  for (auto [s, dt] : cells) {
    w.cells.push_back({t, t + dt, s});
    t += dt;
  }
  w.cells.back().t1 = tf;  // absorb accumulation rounding

  std::vector<double> ev;
  ev.reserve(w.cells.size() + pts + 1);
  for (const auto& c : w.cells) ev.push_back(c.t0);
  for (int i = 0; i < pts; ++i)
    ev.push_back(tf * static_cast<double>(i) / static_cast<double>(pts - 1));
  ev.push_back(tf);
  std::sort(ev.begin(), ev.end());
  const double tol = 1e-12 * std::max(tf, 1.0);
  for (double e : ev) {
    if (w.events.empty() || e - w.events.back() > tol) w.events.push_back(e);
  }
  if (std::abs(w.events.back() - tf) <= tol) w.events.back() = tf;

  w.output_t.reserve(pts);
  w.output_event.reserve(pts);
  for (int i = 0; i < pts; ++i) {
    double target = tf * static_cast<double>(i) / static_cast<double>(pts - 1);
    auto it = std::lower_bound(w.events.begin(), w.events.end(), target - tol);
    int idx = static_cast<int>(it - w.events.begin());
    if (idx >= static_cast<int>(w.events.size()))
      idx = static_cast<int>(w.events.size()) - 1;
    w.output_event.push_back(idx);
    w.output_t.push_back(w.events[idx]);
    w.output_s.push_back(schedule.s_at(w.events[idx]));
  }
  return w;
}

double cell_value_at(const std::vector<Cell>& cells, double t) {
  for (const auto& c : cells)
    if (t < c.t1) return c.s;
  return cells.back().s;
}

// Shared stepper: propagates coordinates across the event grid, invoking
// `on_output` at output events. If `transpose` is set the step matrix is
// exp(L^T dt), the backward costate flow (applied in reverse by the caller).
class StepCache {
 public:
  StepCache(const ControlProblem& problem, bool transpose)
      : problem_(problem), transpose_(transpose) {}

  const RealMatrix& step(double s, double dt) {
    auto key = std::make_pair(double_bits(s), double_bits(dt));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    RealMatrix g = problem_.generator(s).matrix();
    if (transpose_) g = g.transpose();
    g *= dt;
    auto [ins, ok] = cache_.emplace(key, expm(g));
    return ins->second;
  }

 private:
  const ControlProblem& problem_;
  bool transpose_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, RealMatrix> cache_;
};

void check_finite(const std::vector<double>& v, double t) {
  for (double x : v)
    if (!std::isfinite(x))
      throw NumericError("propagation produced a non-finite value at t = " +
                         std::to_string(t));
}

}  // namespace

Trajectory propagate_state(const ControlProblem& problem, const Schedule& schedule,
                           const GridSpec& grid) {
  return propagate_observable(problem, schedule, problem.initial_state(), grid);
}

Trajectory propagate_observable(const ControlProblem& problem,
                                const Schedule& schedule,
                                const HermitianOperator& x0,
                                const GridSpec& grid) {
  if (x0.dim() != problem.full_dim())
    throw ValidationError("propagate: initial operator dimension mismatch");
  Walk w = build_walk(problem, schedule, grid);
  Trajectory traj;
  traj.dim = problem.full_dim();
  traj.t = w.output_t;
  traj.s = w.output_s;
  traj.states.reserve(w.output_t.size());

  std::vector<double> v = coordinatize(x0);
  if (w.cells.empty()) {
    traj.states.push_back(v);
    return traj;
  }

  StepCache cache(problem, /*transpose=*/false);
  std::size_t out_idx = 0;
  for (std::size_t e = 0; e < w.events.size(); ++e) {
    if (e > 0) {
      double dt = w.events[e] - w.events[e - 1];
      double mid = 0.5 * (w.events[e] + w.events[e - 1]);
      v = cache.step(cell_value_at(w.cells, mid), dt).apply(v);
    }
    while (out_idx < w.output_event.size() &&
           w.output_event[out_idx] == static_cast<int>(e)) {
      check_finite(v, w.events[e]);
      traj.states.push_back(v);
      ++out_idx;
    }
  }
  return traj;
}

CostateTrajectory propagate_costate(const ControlProblem& problem,
                                    const Schedule& schedule,
                                    const GridSpec& grid) {
  Walk w = build_walk(problem, schedule, grid);
  CostateTrajectory traj;
  traj.dim = problem.full_dim();
  traj.t = w.output_t;

  // p(t_f) = -cost_op; backward flow dp/dt = -L^dag p, so stepping from t_b
  // down to t_a multiplies by exp(L^T (t_b - t_a)).
  HermitianOperator pf = -1.0 * problem.cost_op();
  std::vector<double> v = coordinatize(pf);
  std::vector<std::vector<double>> rev;
  rev.reserve(w.output_t.size());

  if (w.cells.empty()) {
    traj.costates.push_back(v);
    return traj;
  }

  StepCache cache(problem, /*transpose=*/true);
  int out_idx = static_cast<int>(w.output_event.size()) - 1;
  for (int e = static_cast<int>(w.events.size()) - 1; e >= 0; --e) {
    if (e < static_cast<int>(w.events.size()) - 1) {
      double dt = w.events[e + 1] - w.events[e];
      double mid = 0.5 * (w.events[e + 1] + w.events[e]);
      v = cache.step(cell_value_at(w.cells, mid), dt).apply(v);
    }
    while (out_idx >= 0 && w.output_event[out_idx] == e) {
      check_finite(v, w.events[e]);
      rev.push_back(v);
      --out_idx;
    }
  }
  traj.costates.assign(rev.rbegin(), rev.rend());
  return traj;
}

std::vector<double> propagate_endpoint(const ControlProblem& problem,
                                       const Schedule& schedule) {
  std::vector<double> v = coordinatize(problem.initial_state());
  auto cells = schedule.constant_cells(0.0);
  StepCache cache(problem, false);
  for (auto [s, dt] : cells) v = cache.step(s, dt).apply(v);
  check_finite(v, schedule.total_duration());
  return v;
}

double evaluate_cost_coords(const std::vector<double>& final_state,
                            const ControlProblem& problem) {
  std::vector<double> c = coordinatize(problem.cost_op());
  return kernels::dot(c.size(), c.data(), final_state.data());
}

double evaluate_cost(const Trajectory& traj, const ControlProblem& problem) {
  return evaluate_cost_coords(traj.states.back(), problem);
}

}  // namespace qoc
