#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qoc/operators.hpp"
#include "qoc/schedule.hpp"

// Closed-form machinery for the single-qubit problem B = sx/2, C = sz/2 in
// Bloch coordinates. Bang arcs are exact 3x3 rotations, anneal cells exact
// Rodrigues rotations about the tilted axis, so this module carries no
// integration error and serves as the repository's oracle.
namespace qoc::qubit {

using Vec3 = std::array<double, 3>;

// e^{t K_B}: counterclockwise rotation about v1.
Vec3 rot_x(double t, const Vec3& v);
// e^{t K_C}: counterclockwise rotation about v3.
Vec3 rot_z(double t, const Vec3& v);
// e^{t M(s)} with M(s) = (1-s) K_C + s K_B (rotation about (s, 0, 1-s)).
Vec3 rot_mixed(double s, double t, const Vec3& v);

Vec3 bloch_from_density(const HermitianOperator& rho);
HermitianOperator density_from_bloch(const Vec3& v);

struct BlochTrajectory {
  std::vector<double> t;
  std::vector<double> s;
  std::vector<Vec3> v;
};

BlochTrajectory bloch_propagate(const Vec3& v0, const Schedule& schedule,
                                int output_points = 2001);
Vec3 bloch_endpoint(const Vec3& v0, const Schedule& schedule);

// cost J = v3/2
double bloch_cost(const Vec3& v);

// Equal-halves two-bang schedule; for t_f >= pi the t_f = pi optimum is
// padded with a trailing s == 0 arc (optimal schedules past the critical
// time are non-unique) and `padded` is set.
struct OptimalBangBang {
  Schedule schedule;
  double cost;
  double switch_time;
  bool padded;
};
OptimalBangBang optimal_bangbang(double t_f);

// Propagates an ensemble of random admissible schedules to t_small and
// records the attained range of v3. For v0 = (1,0,0) the minimum stays
// >= -tol; for v0 = (-1,0,0) the maximum stays <= +tol.
struct SignCheckReport {
  int n_schedules = 0;
  double t_small = 0.0;
  double min_v3 = 0.0;
  double max_v3 = 0.0;
};
SignCheckReport small_time_sign_check(const Vec3& v0, int n_schedules,
                                      double t_small, std::uint64_t seed);

// Switching-sequence recursion: Delta_0 = 0, Delta_k = tau_k - Delta_{k-1}.
// Verifies, at every interior switch n,
//   (-1)^n sin(Delta_n) r0y = r0z     and   r(t_n) = (r0z, cos(Delta_n) r0y, r0z)
// for the switching operator S = r . sigma propagated through the exact
// rotations, and the final-arc condition sin(Delta_N) = 0.
struct DeltaRecursionReport {
  std::vector<double> deltas;       // Delta_1 .. Delta_N
  int first_violation = 0;          // 1-based interior index, 0 if none
  double max_residual = 0.0;        // over the interior checks
  double final_arc_residual = 0.0;  // |sin(Delta_N)|
};
DeltaRecursionReport delta_recursion_check(double r0y, double r0z,
                                           const std::vector<double>& taus,
                                           double tol = 1e-10);

}  // namespace qoc::qubit
