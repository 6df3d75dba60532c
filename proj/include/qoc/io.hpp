#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qoc/arcstats.hpp"
#include "qoc/dynamics.hpp"
#include "qoc/pmp.hpp"

namespace qoc::io {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Matrix encoding: nested arrays of [re, im] pairs, row-major.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const json& j);

// Problem document: {"kind": ..., "B"/"C" or "ising": ..., "rho0": matrix or
// "ground_of_B", open-model payload fields}.
ControlProblem problem_from_json(const json& j);

ControlProblem load_problem(const std::string& path);
Schedule load_schedule(const std::string& path);
json load_json(const std::string& path);

// FNV-1a of the raw file bytes, hex-encoded; input provenance for outputs.
std::string file_hash(const std::string& path);

// {"version", "seed", "inputs": {path: hash}}
json run_metadata(std::uint64_t seed, const std::vector<std::string>& inputs);

void write_text(const std::string& path, const std::string& content);
std::string format_float(double x);  // %.17g

std::string trajectory_csv(const ControlProblem& problem, const Trajectory& traj);
std::string switching_csv(const PMPAnalysis& analysis);
std::string shortening_csv(const ShorteningTable& table);

}  // namespace qoc::io
