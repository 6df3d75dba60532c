#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qoc/errors.hpp"
#include "qoc/opensys.hpp"
#include "qoc/optimize.hpp"

using namespace qoc;
using qoc::test::max_abs_diff;

namespace {

HermitianOperator qubit_ground() {
  return 0.5 * (HermitianOperator::identity(2) - pauli_x());
}

JointModel dephasing_joint(double coupling = 0.3, double env_field = 0.7) {
  JointModel m;
  m.B = 0.5 * pauli_x();
  m.C = 0.5 * pauli_z();
  m.couplings.emplace_back(coupling * pauli_z(), pauli_x());
  m.H_E = env_field * pauli_z();
  // Gibbs-like diagonal environment state (commutes with H_E)
  ComplexMatrix re(2, 2);
  re(0, 0) = 0.35;
  re(1, 1) = 0.65;
  m.rho_E = HermitianOperator(std::move(re));
  return m;
}

RedfieldModel dephasing_redfield(double g = 0.05, double tau = 0.7,
                                 double w0 = 0.3) {
  RedfieldModel m;
  m.B = 0.5 * pauli_x();
  m.C = 0.5 * pauli_z();
  m.couplings.push_back(pauli_z());
  m.kernels = {{CorrelationSpec{g, tau, w0}}};
  return m;
}

GAMEModel dephasing_game(SpectralDensity gamma) {
  GAMEModel m;
  m.B = 0.5 * pauli_x();
  m.C = 0.5 * pauli_z();
  m.couplings.push_back(pauli_z());
  m.gamma = gamma;
  return m;
}

double identity_row_norm(const Superoperator& l) {
  // the identity component is the last basis index; its row must vanish for
  // a trace-preserving generator
  const RealMatrix& m = l.matrix();
  int row = m.rows() - 1;
  double s = 0.0;
  for (int j = 0; j < m.cols(); ++j) s = std::max(s, std::abs(m(row, j)));
  return s;
}

}  // namespace

TEST_CASE("correlation half-Fourier integral: closed forms") {
  CorrelationSpec k{0.8, 0.5, 0.0};
  // t_max = infinity: g / (1/tau + i w)
  cd got = k.half_fourier(2.0);
  cd want = 0.8 / cd{2.0, 2.0};
  CHECK(std::abs(got - want) < 1e-14);
  // finite t_max approaches the infinite-horizon value
  CorrelationSpec kf = k;
  kf.t_max = 50.0;
  CHECK(std::abs(kf.half_fourier(2.0) - want) < 1e-14);
  kf.t_max = 0.0;
  CHECK(std::abs(kf.half_fourier(2.0)) < 1e-14);
}

TEST_CASE("joint liouvillian: decoupled limit reduces to the closed system") {
  JointModel m = dephasing_joint(0.0, 0.0);
  m.couplings.clear();
  m.H_E = HermitianOperator::zero(2);
  ControlProblem joint = ControlProblem::joint(m, qubit_ground());
  ControlProblem closed =
      ControlProblem::closed(0.5 * pauli_x(), 0.5 * pauli_z(), qubit_ground());

  Schedule sched = Schedule::bangs(0, {0.7, 0.5});
  Trajectory jt = propagate_state(joint, sched, {51, 1e-3});
  Trajectory ct = propagate_state(closed, sched, {51, 1e-3});
  for (std::size_t i = 0; i < jt.t.size(); ++i) {
    ComplexMatrix want = kron(ct.state_at(i).matrix(), m.rho_E.matrix());
    CHECK(max_abs_diff(jt.state_at(i).matrix(), want) < 1e-11);
  }
}

TEST_CASE("joint liouvillian matches the direct commutator on random operators") {
  JointModel m = dephasing_joint();
  for (double s : {0.0, 0.5, 1.0}) {
    Superoperator l = joint_liouvillian(m, s);
    ComplexMatrix h = m.h_total(s).matrix();
    Rng rng(61);
    for (int trial = 0; trial < 5; ++trial) {
      HermitianOperator x = random_hermitian(4, rng);
      ComplexMatrix want = commutator(h, x.matrix());
      want *= cd{0.0, -1.0};
      CHECK(max_abs_diff(l.apply(x).matrix(), want) < 1e-12);
    }
    // antisymmetry in coordinates
    CHECK(max_abs_diff(l.matrix().transpose(), -1.0 * l.matrix()) < 1e-12);
  }
}

TEST_CASE("joint model validation: dimension cap and trace") {
  JointModel m = dephasing_joint();
  CHECK_THROWS_AS(m.validate(2), ValidationError);
  m.rho_E = HermitianOperator(2.0 * m.rho_E.matrix(), 1e-6);
  CHECK_THROWS_AS(m.validate(), ValidationError);
}

TEST_CASE("redfield generator: decoupled limit and the scalar W formula") {
  RedfieldModel m0 = dephasing_redfield(0.0);
  Superoperator l = redfield_generator(m0, 0.3);
  Superoperator kh = commutator_superop(
      HermitianOperator((0.3 * (0.5 * pauli_x()) + 0.7 * (0.5 * pauli_z())).matrix()));
  CHECK(max_abs_diff(l.matrix(), kh.matrix()) < 1e-13);

  // s = 0: H_S = C commutes with S = sigma_z, so W is a scalar multiple
  RedfieldModel m = dephasing_redfield(0.05, 0.7, 0.3);
  auto w = redfield_w_matrices(m, 0.0);
  cd scalar = 0.05 * 0.7 / cd{1.0, 0.3 * 0.7};
  ComplexMatrix want = pauli_z().matrix();
  want *= scalar;
  CHECK(max_abs_diff(w[0][0], want) < 1e-14);
}

TEST_CASE("redfield dissipator: trace row, adjoint transpose, D^dag identities") {
  for (double s : {0.0, 0.4, 1.0}) {
    RedfieldModel m = dephasing_redfield();
    Superoperator d = redfield_dissipator(m, s);
    Superoperator dad = redfield_adjoint_dissipator(m, s);

    CHECK(identity_row_norm(redfield_generator(m, s)) < 1e-12);
    CHECK(max_abs_diff(dad.matrix(), d.matrix().transpose()) < 1e-10);

    // D^dag I = 0 (dual of trace preservation)
    CHECK(redfield_adjoint_apply(m, s, ComplexMatrix::identity(2)).max_abs() <
          1e-13);
    // [S, C] = 0 gives D^dag C = 0 exactly
    CHECK(redfield_adjoint_apply(m, s, (0.5 * pauli_z()).matrix()).max_abs() <
          1e-13);
  }

  // a transverse (non-commuting) coupling still satisfies the transpose
  // identity even though D^dag C no longer vanishes
  RedfieldModel mx = dephasing_redfield();
  mx.couplings = {pauli_x()};
  Superoperator d = redfield_dissipator(mx, 0.4);
  Superoperator dad = redfield_adjoint_dissipator(mx, 0.4);
  CHECK(max_abs_diff(dad.matrix(), d.matrix().transpose()) < 1e-10);
  CHECK(redfield_adjoint_apply(mx, 0.4, (0.5 * pauli_z()).matrix()).max_abs() >
        1e-4);
}

TEST_CASE("redfield generator depends on time only through s") {
  RedfieldModel m = dephasing_redfield();
  RealMatrix a = redfield_generator(m, 0.37).matrix();
  RealMatrix b = redfield_generator(m, 0.37).matrix();
  CHECK(max_abs_diff(a, b) == 0.0);
}

TEST_CASE("redfield kernel PSD validation") {
  RedfieldModel m = dephasing_redfield(-0.1);
  CHECK_THROWS_AS(m.validate(), ValidationError);
}

TEST_CASE("GAME generator: constant gamma cancellation and its breakdown") {
  SpectralDensity flat;
  flat.kind = SpectralDensity::Kind::constant;
  flat.value = 0.2;
  GAMEModel mflat = dephasing_game(flat);
  // [S,C] = 0 and constant gamma: D^dag C = 0
  for (double s : {0.0, 0.5, 1.0})
    CHECK(game_adjoint_apply(mflat, s, (0.5 * pauli_z()).matrix()).max_abs() <
          1e-12);

  SpectralDensity ohmic;
  ohmic.kind = SpectralDensity::Kind::ohmic;
  ohmic.eta = 0.4;
  ohmic.beta = 1.2;
  ohmic.omega_c = 8.0;
  GAMEModel mohm = dephasing_game(ohmic);
  // same commuting couplings, frequency-dependent gamma: no cancellation
  double norm_mid = game_adjoint_apply(mohm, 0.5, (0.5 * pauli_z()).matrix())
                        .frobenius_norm();
  CHECK(norm_mid > 1e-6);
  // at s = 0 the eigenbasis diagonalizes S and C together, so the
  // cancellation is restored even for frequency-dependent gamma
  CHECK(game_adjoint_apply(mohm, 0.0, (0.5 * pauli_z()).matrix()).max_abs() <
        1e-12);

  // adjoint is the transpose; trace row vanishes; D^dag I = 0
  Superoperator d = game_dissipator(mohm, 0.5);
  Superoperator dad = game_adjoint_dissipator(mohm, 0.5);
  CHECK(max_abs_diff(dad.matrix(), d.matrix().transpose()) < 1e-10);
  CHECK(identity_row_norm(game_generator(mohm, 0.5)) < 1e-12);
  CHECK(game_adjoint_apply(mohm, 0.5, ComplexMatrix::identity(2)).max_abs() <
        1e-13);

  // empty couplings: no dissipator
  GAMEModel empty = dephasing_game(flat);
  empty.couplings.clear();
  CHECK(game_dissipator(empty, 0.5).matrix().max_abs() == 0.0);
}

TEST_CASE("GAME rejects a negative spectral density, naming the frequency") {
  SpectralDensity bad;
  bad.kind = SpectralDensity::Kind::ohmic;
  bad.eta = -1.0;
  bad.beta = 1.0;
  bad.omega_c = 10.0;
  GAMEModel m = dephasing_game(bad);
  CHECK_THROWS_WITH_AS(game_jump_operators(m, 0.5),
                       doctest::Contains("gamma("), ValidationError);
}

TEST_CASE("GAME propagation preserves trace and positivity") {
  SpectralDensity ohmic;
  ohmic.kind = SpectralDensity::Kind::ohmic;
  ohmic.eta = 0.3;
  ohmic.beta = 1.0;
  ohmic.omega_c = 5.0;
  ControlProblem p = ControlProblem::game(dephasing_game(ohmic), qubit_ground());
  Rng rng(62);
  std::vector<double> s(40);
  for (double& v : s) v = rng.uniform();
  Trajectory traj = propagate_state(p, Schedule::discretized(s, 2.0), {101, 1e-3});
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    CHECK(std::abs(traj.trace_at(i) - 1.0) < 1e-9);
    CHECK(traj.min_eig_at(i) >= -1e-9);
  }
}

TEST_CASE("redfield propagation preserves trace; positivity only monitored") {
  ControlProblem p =
      ControlProblem::redfield(dephasing_redfield(0.08), qubit_ground());
  Rng rng(63);
  std::vector<double> s(30);
  for (double& v : s) v = rng.uniform();
  Trajectory traj = propagate_state(p, Schedule::discretized(s, 2.0), {101, 1e-3});
  for (std::size_t i = 0; i < traj.t.size(); ++i)
    CHECK(std::abs(traj.trace_at(i) - 1.0) < 1e-9);
}

TEST_CASE("pairing <p, rho> is conserved for redfield and game kinds") {
  SpectralDensity ohmic;
  ohmic.kind = SpectralDensity::Kind::ohmic;
  ohmic.eta = 0.3;
  ohmic.beta = 1.0;
  ohmic.omega_c = 5.0;
  ControlProblem pr =
      ControlProblem::redfield(dephasing_redfield(0.08), qubit_ground());
  ControlProblem pg = ControlProblem::game(dephasing_game(ohmic), qubit_ground());
  Rng rng(64);
  for (const ControlProblem* p : {&pr, &pg}) {
    std::vector<double> s(25);
    for (double& v : s) v = rng.uniform();
    Schedule sched = Schedule::discretized(s, 1.5);
    PMPAnalysis a = pmp_records(*p, sched, {201, 1e-3});
    CHECK(a.pair_drift < 1e-8);
    CHECK(!a.has_switching_coords);
  }
}

TEST_CASE("joint dephasing endpoint structure: final arc is bang1") {
  JointModel m = dephasing_joint(0.25, 0.9);
  ControlProblem p = ControlProblem::joint(m, qubit_ground());

  OptimizeConfig cfg;
  cfg.restarts = 6;
  cfg.seed = 2;
  OptimizationResult res = optimize_switch_times(p, 4, 0.6 * M_PI, cfg);
  OpenTheoremReport rep = open_theorem_checks(p, res);

  // dephasing coupling commutes with C (x) I, the environment state is
  // stationary, but the interaction does not fix rho0 (x) rho_E
  CHECK(rep.hypotheses[0].satisfied);
  CHECK(rep.hypotheses[1].satisfied);
  CHECK(!rep.hypotheses[2].satisfied);
  CHECK(rep.lambda_positive);
  CHECK(rep.final_arc == Verdict::holds);
  CHECK(rep.initial_arc == Verdict::not_applicable);
}

TEST_CASE("redfield endpoint: optimized schedule ends at s = 1") {
  ControlProblem p =
      ControlProblem::redfield(dephasing_redfield(0.05, 0.7, 0.2), qubit_ground());
  OptimizeConfig cfg;
  cfg.restarts = 2;
  cfg.seed = 4;
  cfg.max_iters = 800;
  OptimizationResult res = optimize_discretized(p, 60, 2.2, cfg);
  OpenTheoremReport rep = open_theorem_checks(p, res);
  CHECK(rep.hypotheses[0].satisfied);
  REQUIRE(rep.lambda_positive);
  CHECK(rep.s_tf_one == Verdict::holds);
}
