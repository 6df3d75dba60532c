#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qoc/errors.hpp"
#include "qoc/pmp.hpp"

using namespace qoc;
using qoc::test::max_abs_diff;

namespace {

ControlProblem qubit_problem(HermitianOperator rho0) {
  return ControlProblem::closed(0.5 * pauli_x(), 0.5 * pauli_z(), std::move(rho0));
}

HermitianOperator qubit_ground() {
  return 0.5 * (HermitianOperator::identity(2) - pauli_x());
}

}  // namespace

TEST_CASE("x_B(0) = 0 when [B, rho0] = 0 and x_C(t_f) = 0 always") {
  ControlProblem p = qubit_problem(qubit_ground());
  Rng rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> s(20);
    for (double& v : s) v = rng.uniform();
    Schedule sched = Schedule::discretized(s, 1.0 + trial * 0.7);
    PMPAnalysis a = pmp_records(p, sched, {401, 1e-3});
    CHECK(std::abs(a.x_b_initial) < 1e-10);
    CHECK(std::abs(a.x_c_final) < 1e-10);
    CHECK(a.pair_drift < 1e-8);
  }
}

TEST_CASE("control Hamiltonian identity H = x_C + s (x_B - x_C) (closed)") {
  ControlProblem p = qubit_problem(qubit_ground());
  Rng rng(42);
  std::vector<double> s(31);
  for (double& v : s) v = rng.uniform();
  Schedule sched = Schedule::discretized(s, 2.3);
  PMPAnalysis a = pmp_records(p, sched);
  for (const auto& r : a.records)
    CHECK(std::abs(r.H_value - (r.x_C + r.s * (r.x_B - r.x_C))) < 1e-10);
}

TEST_CASE("optimal two-bang trajectory traces the switching diagram") {
  const double tf = 0.95 * M_PI;
  ControlProblem p = qubit_problem(qubit_ground());
  Schedule sched = Schedule::bangs(0, {tf / 2, tf / 2});
  PMPAnalysis a = pmp_records(p, sched);

  double lambda = a.classification.lambda;
  CHECK(lambda > 0.0);
  CHECK(a.classification.lambda_residual < 1e-5 * (1.0 + std::abs(lambda)));
  CHECK(std::abs(a.x_b_initial) < 1e-10);
  CHECK(std::abs(a.x_c_final) < 1e-10);
  // first arc rides the line x_C = lambda; the endpoint is (0, lambda)
  for (const auto& r : a.records) {
    if (r.t < tf / 2 - 1e-9) CHECK(std::abs(r.x_C - lambda) < 1e-9);
  }
  CHECK(std::abs(a.records.back().x_B - lambda) < 1e-9);

  // exactly two intervals: bang0 then bang1, no singular arc
  REQUIRE(a.classification.intervals.size() == 2);
  CHECK(a.classification.intervals[0].label == ArcLabel::bang0);
  CHECK(a.classification.intervals[1].label == ArcLabel::bang1);
  CHECK(a.classification.intervals[0].t_start == doctest::Approx(0.0));
  CHECK(a.classification.intervals[0].t_end == doctest::Approx(tf / 2).epsilon(1e-3));
  CHECK(a.classification.intervals[1].t_end == doctest::Approx(tf));
  CHECK(a.classification.schedule_consistency == doctest::Approx(1.0));

  // H is constant within each bang arc
  for (const auto& iv : a.classification.intervals) {
    double mean = 0.0;
    int cnt = 0;
    for (const auto& r : a.records)
      if (r.t >= iv.t_start && r.t <= iv.t_end) {
        mean += r.H_value;
        ++cnt;
      }
    mean /= cnt;
    for (const auto& r : a.records)
      if (r.t >= iv.t_start && r.t <= iv.t_end)
        CHECK(std::abs(r.H_value - mean) < 1e-8);
  }
}

TEST_CASE("stationary maximally mixed state gives a single singular interval") {
  ControlProblem p = qubit_problem(0.5 * HermitianOperator::identity(2));
  Schedule sched = Schedule::bangs(1, {1.5});
  PMPAnalysis a = pmp_records(p, sched);
  // S = i[p, rho] = 0 identically, so the switching function vanishes
  for (const auto& r : a.records) CHECK(std::abs(r.switching_fn) < 1e-12);
  CHECK(std::abs(a.classification.lambda) < 1e-12);
  REQUIRE(a.classification.intervals.size() == 1);
  CHECK(a.classification.intervals[0].label == ArcLabel::singular);
}

TEST_CASE("classify_arcs on a constant positive switching function") {
  std::vector<PMPRecord> recs;
  for (int i = 0; i <= 100; ++i) {
    PMPRecord r{};
    r.t = 0.01 * i;
    r.s = 1.0;
    r.x_C = 0.0;
    r.x_B = 0.1;
    r.switching_fn = 0.1;
    recs.push_back(r);
  }
  ArcClassification c = classify_arcs(recs, 1e-6);
  REQUIRE(c.intervals.size() == 1);
  CHECK(c.intervals[0].label == ArcLabel::bang1);
  CHECK(c.schedule_consistency == doctest::Approx(1.0));
}

TEST_CASE("propagate_switching: zero initial condition stays zero") {
  ControlProblem p = qubit_problem(qubit_ground());
  Schedule sched = Schedule::bangs(0, {0.6, 0.9});
  Trajectory s = propagate_switching(p, sched, HermitianOperator::zero(2));
  for (const auto& v : s.states)
    for (double x : v) CHECK(std::abs(x) < 1e-15);
}

TEST_CASE("propagate_switching matches the rotation closed form and 2pi return") {
  const double lambda = 0.37;
  ControlProblem p = qubit_problem(qubit_ground());
  HermitianOperator s0 = lambda * (pauli_x() + pauli_z());
  Schedule sched = Schedule::bangs(0, {2.0 * M_PI});
  GridSpec grid{2001, 1e-3};
  Trajectory st = propagate_switching(p, sched, s0, grid);

  HermitianOperator b = 0.5 * pauli_x();
  HermitianOperator c = 0.5 * pauli_z();
  double first_return = -1.0;
  bool left_level = false;  // x_B starts at the switching level, skip departure
  for (std::size_t i = 0; i < st.t.size(); ++i) {
    double t = st.t[i];
    HermitianOperator s_t = st.state_at(i);
    // S(t) = lambda (cos t sx + sin t sy + sz) under s == 0
    HermitianOperator want =
        lambda * (std::cos(t) * pauli_x() + std::sin(t) * pauli_y() + pauli_z());
    CHECK(max_abs_diff(s_t.matrix(), want.matrix()) < 1e-10);
    double xb = hs_inner(b, s_t);
    double xc = hs_inner(c, s_t);
    CHECK(std::abs(xc - lambda) < 1e-10);  // x_C pinned at lambda on s == 0
    if (std::abs(xb - lambda) > 0.1 * lambda) left_level = true;
    if (left_level && first_return < 0.0 && std::abs(xb - lambda) < 1e-6 * lambda)
      first_return = t;
  }
  CHECK(first_return == doctest::Approx(2.0 * M_PI).epsilon(1e-3));
}

TEST_CASE("switching equation agrees with i[p, rho] on a random instance") {
  Rng rng(44);
  HermitianOperator b = random_hermitian(4, rng);
  HermitianOperator c = random_hermitian(4, rng);
  HermitianOperator rho0 = random_density(4, rng);
  ControlProblem p = ControlProblem::closed(b, c, rho0);
  std::vector<double> sv(25);
  for (double& v : sv) v = rng.uniform();
  Schedule sched = Schedule::discretized(sv, 1.2);
  GridSpec grid{201, 1e-3};

  Trajectory rho = propagate_state(p, sched, grid);
  CostateTrajectory cot = propagate_costate(p, sched, grid);
  HermitianOperator s0 =
      switching_operator(cot.costate_at(0), rho.state_at(0));
  Trajectory st = propagate_switching(p, sched, s0, grid);
  for (std::size_t i = 0; i < st.t.size(); ++i) {
    HermitianOperator direct =
        switching_operator(cot.costate_at(i), rho.state_at(i));
    CHECK(max_abs_diff(st.state_at(i).matrix(), direct.matrix()) < 1e-8);
    CHECK(std::abs(st.state_at(i).trace()) < 1e-12);  // S is traceless
  }
}

TEST_CASE("propagate_switching rejects open generator kinds") {
  JointModel m;
  m.B = 0.5 * pauli_x();
  m.C = 0.5 * pauli_z();
  m.H_E = pauli_z();
  m.rho_E = 0.5 * HermitianOperator::identity(2);
  ControlProblem p = ControlProblem::joint(m, qubit_ground());
  CHECK_THROWS_AS(
      propagate_switching(p, Schedule::bangs(0, {1.0}),
                          HermitianOperator::zero(4)),
      ValidationError);
}

TEST_CASE("singular diagnostics reproduce the s = 1/2 feedback law") {
  HermitianOperator b = 0.5 * pauli_x();
  HermitianOperator c = 0.5 * pauli_z();
  HermitianOperator s_op = 0.37 * (pauli_x() + pauli_z());
  SingularDiagnostics d = singular_diagnostics(s_op, b, c);
  CHECK(std::abs(d.c1) < 1e-14);  // no sigma_y component
  REQUIRE(d.s_feedback.has_value());
  CHECK(*d.s_feedback == doctest::Approx(0.5).epsilon(1e-12));
  // at the feedback value the second-order condition closes
  SingularDiagnostics at_fb = singular_diagnostics(s_op, b, c, *d.s_feedback);
  CHECK(std::abs(at_fb.c2) < 1e-12);
}

TEST_CASE("singular diagnostics flag a non-singular switching operator") {
  HermitianOperator b = 0.5 * pauli_x();
  HermitianOperator c = 0.5 * pauli_z();
  // D = [C,B] = i sy / 2; choose S with <[C,B],S> of magnitude 0.3
  HermitianOperator s_op = -0.3 * pauli_y();
  SingularDiagnostics d = singular_diagnostics(s_op, b, c);
  CHECK(std::abs(d.c1) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("Gram-Schmidt construction orthogonal to [C,B] gives c1 ~ 0") {
  Rng rng(45);
  HermitianOperator b = random_hermitian(3, rng);
  HermitianOperator c = random_hermitian(3, rng);
  ComplexMatrix d = commutator(c.matrix(), b.matrix());
  // Hermitian direction carrying the singular condition: i[C,B]
  ComplexMatrix d_h = d;
  d_h *= cd{0.0, 1.0};
  HermitianOperator dir{d_h};
  HermitianOperator cand = random_hermitian(3, rng);
  double overlap = hs_inner(dir, cand) / hs_inner(dir, dir);
  HermitianOperator s_orth = cand - overlap * dir;
  SingularDiagnostics diag = singular_diagnostics(s_orth, b, c);
  CHECK(std::abs(diag.c1) < 1e-12);
}
