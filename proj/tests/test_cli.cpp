#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "qoc/cli.hpp"
#include "qoc/io.hpp"

using namespace qoc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qoc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kQubitProblem = R"({
  "B": [[[0,0],[0.5,0]],[[0.5,0],[0,0]]],
  "C": [[[0.5,0],[0,0]],[[0,0],[-0.5,0]]],
  "rho0": "ground_of_B"
})";

const char* kS1Schedule = R"({"arcs":[{"type":"bang","s":1,"dt":1.5}]})";

}  // namespace

TEST_CASE("simulate: stationary schedule gives J = 0 and tiny trace drift") {
  TempDir dir;
  write(dir.file("p.json"), kQubitProblem);
  write(dir.file("s.json"), kS1Schedule);
  int rc = cli::run({"simulate", "--problem", dir.file("p.json"), "--schedule",
                     dir.file("s.json"), "--out", dir.file("traj.csv"),
                     "--summary", dir.file("sum.json")});
  REQUIRE(rc == 0);

  io::json sum = io::load_json(dir.file("sum.json"));
  CHECK(std::abs(sum["final_cost"].get<double>()) < 1e-12);
  CHECK(sum["trace_drift"].get<double>() < 1e-9);

  std::string csv = slurp(dir.file("traj.csv"));
  CHECK(csv.rfind("t,s,J,trace,purity,min_eig", 0) == 0);
}

TEST_CASE("optimize: reruns with the same seed are byte-identical") {
  TempDir dir;
  write(dir.file("p.json"), kQubitProblem);
  auto run_once = [&](const std::string& out) {
    return cli::run({"optimize", "--problem", dir.file("p.json"), "--tf", "2.0",
                     "--mode", "bangs", "--arcs", "2", "--seed", "3", "--out",
                     out, "--trace", out + ".csv"});
  };
  REQUIRE(run_once(dir.file("a.json")) == 0);
  REQUIRE(run_once(dir.file("b.json")) == 0);
  CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
  CHECK(slurp(dir.file("a.json.csv")) == slurp(dir.file("b.json.csv")));

  io::json out = io::load_json(dir.file("a.json"));
  CHECK(out["meta"]["version"] == io::kVersion);
  CHECK(out["meta"]["seed"] == 3);
  CHECK(!out["meta"]["inputs"].empty());
}

TEST_CASE("exit code 2 for malformed input, 0 for help-free valid runs") {
  TempDir dir;
  write(dir.file("bad.json"), "{ not json");
  CHECK(cli::run({"simulate", "--problem", dir.file("bad.json"), "--schedule",
                  dir.file("bad.json")}) == 2);

  write(dir.file("p.json"), kQubitProblem);
  write(dir.file("bad_sched.json"), R"({"arcs":[{"type":"bang","s":0.5,"dt":1}]})");
  CHECK(cli::run({"simulate", "--problem", dir.file("p.json"), "--schedule",
                  dir.file("bad_sched.json")}) == 2);

  // unknown subcommand / missing required option
  CHECK(cli::run({"frobnicate"}) == 2);
  CHECK(cli::run({"optimize", "--tf", "1.0"}) == 2);
}

TEST_CASE("lie subcommand reproduces the decoupled-pair fixture") {
  TempDir dir;
  // B = sx (x) I, C = sz (x) I + I (x) sz
  io::json p;
  ComplexMatrix b = kron(pauli_x().matrix(), ComplexMatrix::identity(2));
  ComplexMatrix c = kron(pauli_z().matrix(), ComplexMatrix::identity(2)) +
                    kron(ComplexMatrix::identity(2), pauli_z().matrix());
  p["B"] = io::matrix_to_json(b);
  p["C"] = io::matrix_to_json(c);
  p["rho0"] = io::matrix_to_json(0.25 * ComplexMatrix::identity(4));
  write(dir.file("p.json"), p.dump());

  int rc = cli::run({"lie", "--problem", dir.file("p.json"), "--out",
                     dir.file("lie.json")});
  REQUIRE(rc == 0);
  io::json out = io::load_json(dir.file("lie.json"));
  CHECK(out["dimension"] == 4);
  CHECK(out["full_su"] == false);
}

TEST_CASE("qubit-oracle emits the closed form and passes its self-checks") {
  TempDir dir;
  int rc = cli::run({"qubit-oracle", "--tf", "1.5707963267948966",
                     "--check-all", "--out", dir.file("o.json")});
  REQUIRE(rc == 0);
  io::json out = io::load_json(dir.file("o.json"));
  CHECK(out["cost"].get<double>() == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(out["switch_time"].get<double>() ==
        doctest::Approx(0.7853981633974483).epsilon(1e-12));
  CHECK(out["all_pass"] == true);
}

TEST_CASE("arc-stats writes the expected CSV layout") {
  TempDir dir;
  int rc = cli::run({"arc-stats", "--nmin", "2", "--nmax", "3", "--samples",
                     "5", "--seed", "9", "--out", dir.file("stats.csv"),
                     "--summary", dir.file("stats.json")});
  REQUIRE(rc == 0);
  std::string csv = slurp(dir.file("stats.csv"));
  CHECK(csv.rfind("n,median_dt,q25,q75,horizon_hits", 0) == 0);
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 3);  // header + two rows
}

TEST_CASE("open-sim requires an open kind and reports dissipator diagnostics") {
  TempDir dir;
  write(dir.file("closed.json"), kQubitProblem);
  write(dir.file("s.json"), kS1Schedule);
  CHECK(cli::run({"open-sim", "--problem", dir.file("closed.json"),
                  "--schedule", dir.file("s.json")}) == 2);

  io::json p;
  p["kind"] = "redfield";
  p["B"] = io::matrix_to_json((0.5 * pauli_x()).matrix());
  p["C"] = io::matrix_to_json((0.5 * pauli_z()).matrix());
  p["rho0"] = "ground_of_B";
  p["couplings"] = io::json::array({io::matrix_to_json(pauli_z().matrix())});
  p["kernel"] = {{"g", 0.05}, {"tau_B", 0.7}, {"omega0", 0.2}};
  write(dir.file("red.json"), p.dump());
  int rc = cli::run({"open-sim", "--problem", dir.file("red.json"),
                     "--schedule", dir.file("s.json"), "--out",
                     dir.file("traj.csv"), "--summary", dir.file("sum.json")});
  REQUIRE(rc == 0);
  io::json sum = io::load_json(dir.file("sum.json"));
  // dephasing coupling commutes with C at every s
  for (auto& [key, value] : sum["dissipator_diagnostics"].items())
    CHECK(value.get<double>() < 1e-12);
}

TEST_CASE("pmp-report and switching-diagram write consistent records") {
  TempDir dir;
  write(dir.file("p.json"), kQubitProblem);
  write(dir.file("s.json"),
        R"({"arcs":[{"type":"bang","s":0,"dt":1.4922565104551517},
                    {"type":"bang","s":1,"dt":1.4922565104551517}]})");
  REQUIRE(cli::run({"pmp-report", "--problem", dir.file("p.json"), "--schedule",
                    dir.file("s.json"), "--out", dir.file("rep.json"),
                    "--records", dir.file("rec.csv")}) == 0);
  io::json rep = io::load_json(dir.file("rep.json"));
  CHECK(rep["certificate"]["lambda"].get<double>() > 0.0);
  CHECK(std::abs(rep["certificate"]["x_B_initial"].get<double>()) < 1e-10);
  CHECK(std::abs(rep["certificate"]["x_C_final"].get<double>()) < 1e-10);
  CHECK(rep["certificate"]["intervals"].size() == 2);

  REQUIRE(cli::run({"switching-diagram", "--problem", dir.file("p.json"),
                    "--schedule", dir.file("s.json"), "--out",
                    dir.file("sw.csv")}) == 0);
  std::string csv = slurp(dir.file("sw.csv"));
  CHECK(csv.rfind("t,x_C,x_B,s,label", 0) == 0);
  CHECK(csv.find("bang0") != std::string::npos);
  CHECK(csv.find("bang1") != std::string::npos);
}
