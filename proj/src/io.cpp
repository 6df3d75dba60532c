#include "qoc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qoc/errors.hpp"

namespace qoc::io {

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw ValidationError("matrix: expected a non-empty array of rows");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      throw ValidationError("matrix: ragged rows");
    for (int k = 0; k < cols; ++k) {
      const json& e = j[i][k];
      if (e.is_number()) {
        m(i, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(i, k) = cd{e[0].get<double>(), e[1].get<double>()};
      } else {
        throw ValidationError("matrix: entries must be numbers or [re, im]");
      }
    }
  }
  return m;
}

json schedule_to_json(const Schedule& s) {
  json arcs = json::array();
  for (const auto& arc : s.arcs()) {
    if (const auto* b = std::get_if<BangArc>(&arc)) {
      arcs.push_back({{"type", "bang"}, {"s", b->s}, {"dt", b->duration}});
    } else {
      const auto& a = std::get<AnnealArc>(arc);
      arcs.push_back(
          {{"type", "anneal"}, {"dt", a.duration}, {"samples", a.samples}});
    }
  }
  return {{"arcs", std::move(arcs)}};
}

Schedule schedule_from_json(const json& j) {
  if (!j.contains("arcs") || !j["arcs"].is_array())
    throw ValidationError("schedule: missing 'arcs' array");
  std::vector<Arc> arcs;
  for (const auto& a : j["arcs"]) {
    std::string type = a.value("type", "");
    if (!a.contains("dt"))
      throw ValidationError("schedule: arc missing 'dt'");
    double dt = a["dt"].get<double>();
    if (type == "bang") {
      if (!a.contains("s")) throw ValidationError("schedule: bang missing 's'");
      arcs.push_back(BangArc{a["s"].get<double>(), dt});
    } else if (type == "anneal") {
      if (!a.contains("samples"))
        throw ValidationError("schedule: anneal missing 'samples'");
      arcs.push_back(AnnealArc{a["samples"].get<std::vector<double>>(), dt});
    } else {
      throw ValidationError("schedule: arc type must be 'bang' or 'anneal'");
    }
  }
  return Schedule(std::move(arcs));
}

namespace {

HermitianOperator herm_from_json(const json& j, const char* what) {
  try {
    return HermitianOperator(matrix_from_json(j));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

CorrelationSpec kernel_from_json(const json& j) {
  CorrelationSpec k;
  if (!j.contains("g") || !j.contains("tau_B"))
    throw ValidationError("kernel: needs 'g' and 'tau_B'");
  k.g = j["g"].get<double>();
  k.tau_B = j["tau_B"].get<double>();
  k.omega0 = j.value("omega0", 0.0);
  if (j.contains("t_max") && !j["t_max"].is_null())
    k.t_max = j["t_max"].get<double>();
  if (k.tau_B <= 0.0) throw ValidationError("kernel: tau_B must be positive");
  if (k.g < 0.0) throw ValidationError("kernel: g must be non-negative");
  return k;
}

SpectralDensity gamma_from_json(const json& j) {
  SpectralDensity g;
  std::string type = j.value("type", "constant");
  if (type == "constant") {
    g.kind = SpectralDensity::Kind::constant;
    g.value = j.value("value", 1.0);
  } else if (type == "ohmic") {
    g.kind = SpectralDensity::Kind::ohmic;
    g.eta = j.value("eta", 1.0);
    g.beta = j.value("beta", 1.0);
    g.omega_c = j.value("omega_c", 10.0);
  } else {
    throw ValidationError("gamma: type must be 'constant' or 'ohmic'");
  }
  return g;
}

}  // namespace

ControlProblem problem_from_json(const json& j) {
  HermitianOperator b, c;
  if (j.contains("ising")) {
    const json& is = j["ising"];
    if (!is.contains("n")) throw ValidationError("ising: missing qubit count 'n'");
    int n = is["n"].get<int>();
    if (n < 1 || n > 10) throw ValidationError("ising: n out of range [1,10]");
    std::vector<double> h = is.value("h", std::vector<double>{});
    std::vector<std::array<double, 3>> couplings;
    if (is.contains("J"))
      for (const auto& row : is["J"]) {
        if (row.size() != 3)
          throw ValidationError("ising: J entries must be [i, j, value]");
        couplings.push_back(
            {row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
      }
    std::string driver = is.value("driver", "transverse");
    if (driver != "transverse")
      throw ValidationError("ising: unsupported driver '" + driver + "'");
    c = ising_hamiltonian(n, h, couplings);
    b = transverse_driver(n);
  } else {
    if (!j.contains("B") || !j.contains("C"))
      throw ValidationError("problem: needs 'B' and 'C' (or 'ising')");
    b = herm_from_json(j["B"], "B");
    c = herm_from_json(j["C"], "C");
  }

  HermitianOperator rho0;
  if (!j.contains("rho0") || (j["rho0"].is_string() &&
                              j["rho0"].get<std::string>() == "ground_of_B")) {
    rho0 = ground_state_projector(b);
  } else if (j["rho0"].is_string()) {
    throw ValidationError("rho0: unknown keyword '" +
                          j["rho0"].get<std::string>() + "'");
  } else {
    rho0 = herm_from_json(j["rho0"], "rho0");
  }

  std::string kind = j.value("kind", "closed");
  if (kind == "closed") return ControlProblem::closed(b, c, rho0);

  if (kind == "joint") {
    JointModel m;
    m.B = b;
    m.C = c;
    if (!j.contains("H_E") || !j.contains("rho_E") || !j.contains("couplings"))
      throw ValidationError("joint: needs 'couplings', 'H_E' and 'rho_E'");
    m.H_E = herm_from_json(j["H_E"], "H_E");
    m.rho_E = herm_from_json(j["rho_E"], "rho_E");
    for (const auto& cp : j["couplings"]) {
      if (!cp.contains("S") || !cp.contains("E"))
        throw ValidationError("joint coupling: needs 'S' and 'E'");
      m.couplings.emplace_back(herm_from_json(cp["S"], "coupling S"),
                               herm_from_json(cp["E"], "coupling E"));
    }
    return ControlProblem::joint(std::move(m), rho0);
  }

  if (kind == "redfield" || kind == "game") {
    std::vector<HermitianOperator> couplings;
    if (!j.contains("couplings"))
      throw ValidationError(kind + ": needs 'couplings'");
    for (const auto& cp : j["couplings"]) {
      const json& s_j = cp.contains("S") ? cp["S"] : cp;
      couplings.push_back(herm_from_json(s_j, "coupling S"));
    }
    if (kind == "redfield") {
      RedfieldModel m;
      m.B = b;
      m.C = c;
      m.couplings = std::move(couplings);
      if (!j.contains("kernel")) throw ValidationError("redfield: needs 'kernel'");
      const json& kj = j["kernel"];
      std::size_t k = m.couplings.size();
      m.kernels.assign(k, std::vector<CorrelationSpec>(k));
      if (kj.is_array()) {
        if (kj.size() != k)
          throw ValidationError("redfield: kernel matrix must be K x K");
        for (std::size_t a = 0; a < k; ++a) {
          if (kj[a].size() != k)
            throw ValidationError("redfield: kernel matrix must be K x K");
          for (std::size_t bb = 0; bb < k; ++bb)
            m.kernels[a][bb] = kernel_from_json(kj[a][bb]);
        }
      } else {
        CorrelationSpec diag = kernel_from_json(kj);
        for (std::size_t a = 0; a < k; ++a) m.kernels[a][a] = diag;
      }
      return ControlProblem::redfield(std::move(m), rho0);
    }
    GAMEModel m;
    m.B = b;
    m.C = c;
    m.couplings = std::move(couplings);
    if (!j.contains("gamma")) throw ValidationError("game: needs 'gamma'");
    m.gamma = gamma_from_json(j["gamma"]);
    return ControlProblem::game(std::move(m), rho0);
  }

  throw ValidationError("problem: unknown kind '" + kind + "'");
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("parse error in " + path + ": " + e.what());
  }
  return j;
}

ControlProblem load_problem(const std::string& path) {
  return problem_from_json(load_json(path));
}

Schedule load_schedule(const std::string& path) {
  return schedule_from_json(load_json(path));
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json run_metadata(std::uint64_t seed, const std::vector<std::string>& inputs) {
  json meta;
  meta["version"] = kVersion;
  meta["seed"] = seed;
  json in = json::object();
  for (const auto& p : inputs) in[p] = file_hash(p);
  meta["inputs"] = std::move(in);
  return meta;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
}

std::string format_float(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string trajectory_csv(const ControlProblem& problem, const Trajectory& traj) {
  std::ostringstream os;
  os << "t,s,J,trace,purity,min_eig\n";
  std::vector<double> c = coordinatize(problem.cost_op());
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    double j = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) j += c[k] * traj.states[i][k];
    os << format_float(traj.t[i]) << ',' << format_float(traj.s[i]) << ','
       << format_float(j) << ',' << format_float(traj.trace_at(i)) << ','
       << format_float(traj.purity_at(i)) << ','
       << format_float(traj.min_eig_at(i)) << '\n';
  }
  return os.str();
}

std::string switching_csv(const PMPAnalysis& analysis) {
  std::ostringstream os;
  os << "t,x_C,x_B,s,label\n";
  const auto& intervals = analysis.classification.intervals;
  std::size_t iv = 0;
  for (const auto& r : analysis.records) {
    while (iv + 1 < intervals.size() && r.t > intervals[iv].t_end) ++iv;
    const char* label =
        intervals.empty() ? "-" : to_string(intervals[iv].label);
    os << format_float(r.t) << ',' << format_float(r.x_C) << ','
       << format_float(r.x_B) << ',' << format_float(r.s) << ',' << label
       << '\n';
  }
  return os.str();
}

std::string shortening_csv(const ShorteningTable& table) {
  std::ostringstream os;
  os << "n,median_dt,q25,q75,horizon_hits\n";
  for (const auto& row : table.rows)
    os << row.n_qubits << ',' << format_float(row.median_dt) << ','
       << format_float(row.q25) << ',' << format_float(row.q75) << ','
       << row.horizon_hits << '\n';
  return os.str();
}

}  // namespace qoc::io
