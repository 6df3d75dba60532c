#include "qoc/cli.hpp"

#include <cmath>
#include <iostream>

#include <CLI11.hpp>

#include "qoc/errors.hpp"
#include "qoc/io.hpp"
#include "qoc/opensys.hpp"
#include "qoc/optimize.hpp"
#include "qoc/qubit_analytic.hpp"
#include "qoc/reachability.hpp"

namespace qoc::cli {

namespace {

using io::json;

json intervals_to_json(const ArcClassification& cls) {
  json out = json::array();
  for (const auto& iv : cls.intervals)
    out.push_back({{"t_start", iv.t_start},
                   {"t_end", iv.t_end},
                   {"label", to_string(iv.label)}});
  return out;
}

json certificate_to_json(const PMPAnalysis& a) {
  json out;
  out["lambda"] = a.classification.lambda;
  out["lambda_residual"] = a.classification.lambda_residual;
  out["pair_drift"] = a.pair_drift;
  out["x_B_initial"] = a.x_b_initial;
  out["x_C_final"] = a.x_c_final;
  out["schedule_consistency"] = a.classification.schedule_consistency;
  out["has_switching_coords"] = a.has_switching_coords;
  out["intervals"] = intervals_to_json(a.classification);
  return out;
}

json theorem_report_to_json(const OpenTheoremReport& rep) {
  json hyp = json::array();
  for (const auto& h : rep.hypotheses)
    hyp.push_back({{"name", h.name},
                   {"residual", h.residual},
                   {"satisfied", h.satisfied}});
  auto verdict = [](Verdict v) {
    switch (v) {
      case Verdict::holds: return "holds";
      case Verdict::violated: return "violated";
      default: return "not applicable";
    }
  };
  return {{"hypotheses", std::move(hyp)},
          {"lambda", rep.lambda},
          {"lambda_positive", rep.lambda_positive},
          {"final_arc_bang1", verdict(rep.final_arc)},
          {"initial_arc_bang0", verdict(rep.initial_arc)},
          {"s_tf_equals_one", verdict(rep.s_tf_one)},
          {"summary", rep.summary}};
}

void emit(const json& doc, const std::string& out_path) {
  std::string text = doc.dump(2);
  text.push_back('\n');
  if (out_path.empty())
    std::cout << text;
  else
    io::write_text(out_path, text);
}

struct CommonPaths {
  std::string problem;
  std::string schedule;
};

int cmd_simulate(const CommonPaths& paths, const std::string& out_csv,
                 const std::string& summary_path, int grid_points,
                 std::uint64_t seed, bool open_diagnostics) {
  ControlProblem problem = io::load_problem(paths.problem);
  if (open_diagnostics && problem.kind() == GeneratorKind::closed)
    throw ValidationError("open-sim: field 'kind' must name an open model");
  Schedule schedule = io::load_schedule(paths.schedule);
  GridSpec grid;
  grid.output_points = grid_points;
  Trajectory traj = propagate_state(problem, schedule, grid);
  if (!out_csv.empty()) io::write_text(out_csv, io::trajectory_csv(problem, traj));

  json summary;
  summary["meta"] = io::run_metadata(seed, {paths.problem, paths.schedule});
  summary["kind"] = to_string(problem.kind());
  summary["t_f"] = schedule.total_duration();
  summary["final_cost"] = evaluate_cost(traj, problem);
  double trace_drift = 0.0, min_eig = 1.0;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    trace_drift = std::max(trace_drift, std::abs(traj.trace_at(i) - 1.0));
    min_eig = std::min(min_eig, traj.min_eig_at(i));
  }
  summary["trace_drift"] = trace_drift;
  summary["min_eigenvalue"] = min_eig;
  if (problem.bc_commute())
    summary["warning"] = "[B, C] = 0: the control family is abelian";
  if (schedule.dropped_arcs() > 0)
    summary["dropped_zero_duration_arcs"] = schedule.dropped_arcs();

  if (open_diagnostics) {
    json d;
    for (double s : {0.0, 0.5, 1.0}) {
      std::string key = "ddag_C_norm_at_s_" + io::format_float(s);
      if (problem.kind() == GeneratorKind::redfield)
        d[key] = redfield_adjoint_apply(*problem.redfield_model(), s,
                                        problem.C().matrix())
                     .frobenius_norm();
      else if (problem.kind() == GeneratorKind::game)
        d[key] = game_adjoint_apply(*problem.game_model(), s,
                                    problem.C().matrix())
                     .frobenius_norm();
    }
    summary["dissipator_diagnostics"] = std::move(d);
  }
  emit(summary, summary_path);
  return 0;
}

int cmd_optimize(const std::string& problem_path, double tf,
                 const std::string& mode, int arcs, int grid_n, int restarts,
                 std::uint64_t seed, const std::string& out_path,
                 const std::string& trace_path) {
  ControlProblem problem = io::load_problem(problem_path);
  OptimizeConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;

  OptimizationResult res;
  if (mode == "bangs") {
    res = optimize_switch_times(problem, arcs, tf, cfg);
  } else if (mode == "grid") {
    res = optimize_discretized(problem, grid_n, tf, cfg);
  } else {
    throw ValidationError("optimize: field 'mode' must be 'bangs' or 'grid'");
  }

  json out;
  out["meta"] = io::run_metadata(seed, {problem_path});
  out["kind"] = to_string(problem.kind());
  out["t_f"] = tf;
  out["mode"] = mode;
  out["cost"] = res.cost;
  out["converged"] = res.converged;
  out["restarts_used"] = res.restarts_used;
  out["failed_restarts"] = res.failed_restarts;
  out["certificate"] = certificate_to_json(res.certificate);
  out["schedule"] = io::schedule_to_json(res.schedule);
  // switch_time: end of the first arc for a pure bang sequence
  if (!res.schedule.arcs().empty()) {
    if (const auto* first = std::get_if<BangArc>(&res.schedule.arcs()[0]))
      out["switch_time"] = first->duration;
  }
  if (problem.kind() != GeneratorKind::closed)
    out["theorem_checks"] = theorem_report_to_json(open_theorem_checks(problem, res));

  if (!trace_path.empty()) {
    Trajectory traj = propagate_state(problem, res.schedule);
    io::write_text(trace_path, io::trajectory_csv(problem, traj));
  }
  emit(out, out_path);
  return 0;
}

int cmd_pmp_report(const CommonPaths& paths, const std::string& out_path,
                   const std::string& records_csv, std::uint64_t seed) {
  ControlProblem problem = io::load_problem(paths.problem);
  Schedule schedule = io::load_schedule(paths.schedule);
  PMPAnalysis a = pmp_records(problem, schedule);
  json out;
  out["meta"] = io::run_metadata(seed, {paths.problem, paths.schedule});
  out["kind"] = to_string(problem.kind());
  out["certificate"] = certificate_to_json(a);
  if (!records_csv.empty()) io::write_text(records_csv, io::switching_csv(a));
  emit(out, out_path);
  return 0;
}

int cmd_switching_diagram(const CommonPaths& paths, const std::string& out_csv) {
  ControlProblem problem = io::load_problem(paths.problem);
  Schedule schedule = io::load_schedule(paths.schedule);
  PMPAnalysis a = pmp_records(problem, schedule);
  io::write_text(out_csv, io::switching_csv(a));
  return 0;
}

int cmd_lie(const std::string& problem_path, const std::string& projector_path,
            const std::string& out_path, std::uint64_t seed) {
  ControlProblem problem = io::load_problem(problem_path);
  json out;
  std::vector<std::string> inputs{problem_path};
  if (!projector_path.empty()) inputs.push_back(projector_path);
  out["meta"] = io::run_metadata(seed, inputs);

  LieClosure closure = generate_lie_algebra(problem.B(), problem.C());
  out["dimension"] = closure.dimension;
  out["full_su"] = closure.full_su;
  out["converged"] = closure.converged;
  out["depth_reached"] = closure.depth_reached;

  if (!projector_path.empty()) {
    HermitianOperator p0{io::matrix_from_json(io::load_json(projector_path))};
    BlockReachability r = block_reachability(problem.B(), problem.C(), p0);
    out["projector"] = {{"verdict", to_string(r.verdict)},
                        {"block_dim", r.block_dim},
                        {"block_closure_dimension", r.closure.dimension},
                        {"hyp_residual_B", r.hyp_residual_b},
                        {"hyp_residual_C", r.hyp_residual_c}};
  }
  emit(out, out_path);
  return 0;
}

int cmd_qubit_oracle(double tf, bool check_all, const std::string& out_path,
                     std::uint64_t seed) {
  json out;
  out["meta"] = {{"version", io::kVersion}, {"seed", seed}};
  qubit::OptimalBangBang ob = qubit::optimal_bangbang(tf);
  qubit::Vec3 end = qubit::bloch_endpoint({-1.0, 0.0, 0.0}, ob.schedule);
  out["t_f"] = tf;
  out["switch_time"] = ob.switch_time;
  out["cost"] = ob.cost;
  out["bloch_endpoint"] = {end[0], end[1], end[2]};
  out["padded"] = ob.padded;

  if (check_all) {
    json checks = json::array();
    auto add = [&](const std::string& name, bool pass, double value) {
      checks.push_back({{"name", name}, {"pass", pass}, {"value", value}});
    };

    qubit::SignCheckReport ex =
        qubit::small_time_sign_check({1.0, 0.0, 0.0}, 200, 0.05, seed);
    add("excited start keeps v3 >= 0 at small times", ex.min_v3 >= -1e-9,
        ex.min_v3);
    qubit::SignCheckReport gr =
        qubit::small_time_sign_check({-1.0, 0.0, 0.0}, 200, 0.05, seed);
    add("ground start keeps v3 <= 0 at small times", gr.max_v3 <= 1e-9,
        gr.max_v3);

    double a = 1.1, r0y = 0.8;
    qubit::DeltaRecursionReport rec =
        qubit::delta_recursion_check(r0y, -std::sin(a) * r0y, {a, a});
    add("switching-time recursion on the two-bang sequence",
        rec.first_violation == 0 && rec.final_arc_residual < 1e-10,
        rec.max_residual);

    // agreement between the Bloch oracle and the density-matrix propagator
    Rng rng(seed);
    double max_dev = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> s(15);
      for (double& v : s) v = rng.uniform();
      Schedule sched = Schedule::discretized(s, rng.uniform(0.3, M_PI));
      ControlProblem p = ControlProblem::closed(
          0.5 * pauli_x(), 0.5 * pauli_z(),
          qubit::density_from_bloch({-1.0, 0.0, 0.0}));
      Trajectory traj = propagate_state(p, sched, {41, 1e-3});
      qubit::BlochTrajectory bt =
          qubit::bloch_propagate({-1.0, 0.0, 0.0}, sched, 41);
      for (std::size_t i = 0; i < bt.t.size(); ++i) {
        qubit::Vec3 v = qubit::bloch_from_density(traj.state_at(i));
        for (int k = 0; k < 3; ++k)
          max_dev = std::max(max_dev, std::abs(v[k] - bt.v[i][k]));
      }
    }
    add("Bloch oracle agrees with the density propagator", max_dev < 1e-10,
        max_dev);

    bool costs_ok = true;
    for (double t : {0.5 * M_PI, 0.75 * M_PI, 0.95 * M_PI}) {
      qubit::OptimalBangBang o = qubit::optimal_bangbang(t);
      double direct = qubit::bloch_cost(
          qubit::bloch_endpoint({-1.0, 0.0, 0.0}, o.schedule));
      costs_ok = costs_ok && std::abs(direct - o.cost) < 1e-12;
    }
    add("closed-form costs match propagated costs", costs_ok, 0.0);

    bool all_pass = true;
    for (const auto& c : checks) all_pass = all_pass && c["pass"].get<bool>();
    out["checks"] = std::move(checks);
    out["all_pass"] = all_pass;
  }
  emit(out, out_path);
  return 0;
}

int cmd_arc_stats(int nmin, int nmax, int samples, std::uint64_t seed,
                  const std::string& out_csv, const std::string& summary_path,
                  bool swap_roles, double lambda_frac) {
  CrossingExperiment exp;
  exp.n_min = nmin;
  exp.n_max = nmax;
  exp.instances_per_n = samples;
  exp.seed = seed;
  exp.swap_roles = swap_roles;
  exp.lambda_fraction = lambda_frac;
  ShorteningTable table = shortening_experiment(exp);
  io::write_text(out_csv, io::shortening_csv(table));
  if (!summary_path.empty()) {
    json summary;
    summary["meta"] = {{"version", io::kVersion}, {"seed", seed}};
    summary["rank_correlation"] = table.rank_correlation;
    emit(summary, summary_path);
  }
  return 0;
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"Pontryagin optimal-control toolkit for quantum annealing schedules"};
  app.require_subcommand(1);

  CommonPaths paths;
  std::string out_path, summary_path, trace_path, records_path, projector_path;
  std::uint64_t seed = 0;
  int grid_points = 2001;
  double tf = 1.0;
  std::string mode = "bangs";
  int arcs = 2, grid_n = 200, restarts = 16;
  bool check_all = false, swap_roles = false;
  int nmin = 2, nmax = 5, samples = 100;
  double lambda_frac = 0.2;

  auto* sim = app.add_subcommand("simulate", "propagate a schedule");
  sim->add_option("--problem", paths.problem)->required();
  sim->add_option("--schedule", paths.schedule)->required();
  sim->add_option("--out", out_path);
  sim->add_option("--summary", summary_path);
  sim->add_option("--grid", grid_points);
  sim->add_option("--seed", seed);

  auto* open_sim = app.add_subcommand("open-sim", "propagate an open-system model");
  open_sim->add_option("--problem", paths.problem)->required();
  open_sim->add_option("--schedule", paths.schedule)->required();
  open_sim->add_option("--out", out_path);
  open_sim->add_option("--summary", summary_path);
  open_sim->add_option("--grid", grid_points);
  open_sim->add_option("--seed", seed);

  auto* opt = app.add_subcommand("optimize", "search for an optimal schedule");
  opt->add_option("--problem", paths.problem)->required();
  opt->add_option("--tf", tf)->required();
  opt->add_option("--mode", mode)->check(CLI::IsMember({"bangs", "grid"}));
  opt->add_option("--arcs", arcs);
  opt->add_option("--grid", grid_n);
  opt->add_option("--restarts", restarts);
  opt->add_option("--seed", seed);
  opt->add_option("--out", out_path);
  opt->add_option("--trace", trace_path);

  auto* pmp = app.add_subcommand("pmp-report", "PMP certificate for a schedule");
  pmp->add_option("--problem", paths.problem)->required();
  pmp->add_option("--schedule", paths.schedule)->required();
  pmp->add_option("--out", out_path);
  pmp->add_option("--records", records_path);
  pmp->add_option("--seed", seed);

  auto* sw = app.add_subcommand("switching-diagram",
                                "x_C/x_B trace for plotting");
  sw->add_option("--problem", paths.problem)->required();
  sw->add_option("--schedule", paths.schedule)->required();
  sw->add_option("--out", out_path)->required();

  auto* lie = app.add_subcommand("lie", "dynamical Lie algebra analysis");
  lie->add_option("--problem", paths.problem)->required();
  lie->add_option("--projector", projector_path);
  lie->add_option("--out", out_path);
  lie->add_option("--seed", seed);

  auto* oracle = app.add_subcommand("qubit-oracle", "single-qubit closed forms");
  oracle->add_option("--tf", tf)->required();
  oracle->add_flag("--check-all", check_all);
  oracle->add_option("--out", out_path);
  oracle->add_option("--seed", seed);

  auto* stats = app.add_subcommand("arc-stats", "bang-arc shortening statistics");
  stats->add_option("--nmin", nmin);
  stats->add_option("--nmax", nmax);
  stats->add_option("--samples", samples);
  stats->add_option("--seed", seed);
  stats->add_option("--out", out_path)->required();
  stats->add_option("--summary", summary_path);
  stats->add_flag("--swap-roles", swap_roles);
  stats->add_option("--lambda-frac", lambda_frac);

  std::vector<const char*> argv;
  argv.push_back("qoc");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(paths, out_path, summary_path, grid_points, seed,
                          false);
    if (open_sim->parsed())
      return cmd_simulate(paths, out_path, summary_path, grid_points, seed,
                          true);
    if (opt->parsed())
      return cmd_optimize(paths.problem, tf, mode, arcs, grid_n, restarts, seed,
                          out_path, trace_path);
    if (pmp->parsed())
      return cmd_pmp_report(paths, out_path, records_path, seed);
    if (sw->parsed()) return cmd_switching_diagram(paths, out_path);
    if (lie->parsed()) return cmd_lie(paths.problem, projector_path, out_path, seed);
    if (oracle->parsed()) return cmd_qubit_oracle(tf, check_all, out_path, seed);
    if (stats->parsed())
      return cmd_arc_stats(nmin, nmax, samples, seed, out_path, summary_path,
                           swap_roles, lambda_frac);
  } catch (const ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qoc::cli
