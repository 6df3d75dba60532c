#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "qoc/opensys.hpp"
#include "qoc/operators.hpp"
#include "qoc/schedule.hpp"

namespace qoc {

enum class GeneratorKind { closed, joint, redfield, game };

const char* to_string(GeneratorKind k);

// Control problem: Hamiltonian family s B + (1-s) C acting through one of the
// generator kinds, an initial state, and the final-time horizon carried by
// the schedules. Immutable after construction apart from internal generator
// caches.
class ControlProblem {
 public:
  static ControlProblem closed(HermitianOperator B, HermitianOperator C,
                               HermitianOperator rho0);
  static ControlProblem joint(JointModel model, HermitianOperator rho0);
  static ControlProblem redfield(RedfieldModel model, HermitianOperator rho0);
  static ControlProblem game(GAMEModel model, HermitianOperator rho0);

  GeneratorKind kind() const { return kind_; }
  const HermitianOperator& B() const { return b_; }
  const HermitianOperator& C() const { return c_; }
  const HermitianOperator& rho0() const { return rho0_; }

  // Joint kind: C (x) I_E and rho0 (x) rho_E; otherwise C and rho0.
  const HermitianOperator& cost_op() const { return cost_op_; }
  const HermitianOperator& initial_state() const { return init_; }
  const HermitianOperator& driver_full() const { return driver_full_; }

  int sys_dim() const { return b_.dim(); }
  int full_dim() const { return init_.dim(); }

  bool bc_commute() const { return bc_commute_; }
  bool driver_fixes_initial_state() const { return driver_fixes_init_; }

  const JointModel* joint_model() const { return joint_.get(); }
  const RedfieldModel* redfield_model() const { return redfield_.get(); }
  const GAMEModel* game_model() const { return game_.get(); }

  // H(s) = C + s (B - C) on the system space. Throws on s outside [0,1].
  HermitianOperator hamiltonian_at(double s) const;

  // Coordinatized generator for control value s (cached per problem).
  const Superoperator& generator(double s) const;
  // K_{cost_op} and K_{driver_full}; used by the PMP bookkeeping.
  const Superoperator& k_cost() const;
  const Superoperator& k_driver() const;

 private:
  ControlProblem() = default;
  void init();

  GeneratorKind kind_ = GeneratorKind::closed;
  HermitianOperator b_, c_, rho0_;
  HermitianOperator cost_op_, init_, driver_full_;
  bool bc_commute_ = false;
  bool driver_fixes_init_ = false;
  std::shared_ptr<const JointModel> joint_;
  std::shared_ptr<const RedfieldModel> redfield_;
  std::shared_ptr<const GAMEModel> game_;

  // Generator caches, shared between copies; guarded by their mutex so that
  // parallel restarts can fill them concurrently.
  struct Caches {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, std::shared_ptr<const Superoperator>> gen;
    std::shared_ptr<const Superoperator> k_cost;
    std::shared_ptr<const Superoperator> k_driver;
  };
  std::shared_ptr<Caches> caches_ = std::make_shared<Caches>();
};

struct GridSpec {
  int output_points = 2001;       // uniform output grid over [0, t_f]
  double max_step_frac = 1e-3;    // anneal sub-step cap as a fraction of t_f
};

// Sampled state trajectory in basis coordinates.
struct Trajectory {
  std::vector<double> t;
  std::vector<double> s;
  std::vector<std::vector<double>> states;  // coordinates of rho(t_i)
  int dim = 0;                              // Hilbert-space dimension

  HermitianOperator state_at(int i) const;
  double trace_at(int i) const;
  double purity_at(int i) const;
  double min_eig_at(int i) const;
};

struct CostateTrajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> costates;  // coordinates of p(t_i)
  int dim = 0;

  HermitianOperator costate_at(int i) const;
};

Trajectory propagate_state(const ControlProblem& problem, const Schedule& schedule,
                           const GridSpec& grid = {});
CostateTrajectory propagate_costate(const ControlProblem& problem,
                                    const Schedule& schedule,
                                    const GridSpec& grid = {});

// Forward propagation of an arbitrary Hermitian initial value under the same
// generator family (used by the switching-operator equation).
Trajectory propagate_observable(const ControlProblem& problem,
                                const Schedule& schedule,
                                const HermitianOperator& x0,
                                const GridSpec& grid = {});

// rho(t_f) coordinates only; the optimizer's fast path.
std::vector<double> propagate_endpoint(const ControlProblem& problem,
                                       const Schedule& schedule);

double evaluate_cost(const Trajectory& traj, const ControlProblem& problem);
double evaluate_cost_coords(const std::vector<double>& final_state,
                            const ControlProblem& problem);

}  // namespace qoc
