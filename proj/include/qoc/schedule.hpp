#pragma once

#include <variant>
#include <vector>

namespace qoc {

// Control arcs. A bang holds s at 0 or 1; an anneal holds piecewise-constant
// sampled values on a uniform sub-grid of its duration (m samples = m cells).
struct BangArc {
  double s;  // 0 or 1
  double duration;
};

struct AnnealArc {
  std::vector<double> samples;  // values in [0,1], one per uniform cell
  double duration;
};

using Arc = std::variant<BangArc, AnnealArc>;

class Schedule {
 public:
  Schedule() = default;
  // Validates arcs; zero-duration arcs are dropped (counted in
  // dropped_arcs()). Bang values snap to {0,1}, anneal samples must lie in
  // [0,1] up to 1e-9 slack.
  explicit Schedule(std::vector<Arc> arcs);

  // Alternating bang sequence starting at `start_value`.
  static Schedule bangs(int start_value, const std::vector<double>& durations);
  // One piecewise-constant cell per sample over [0, t_f].
  static Schedule discretized(const std::vector<double>& samples, double t_f);

  const std::vector<Arc>& arcs() const { return arcs_; }
  double total_duration() const { return total_; }
  int dropped_arcs() const { return dropped_; }

  // Right-continuous control value; s_at(total_duration()) returns the final
  // cell's value.
  double s_at(double t) const;

  // Flatten into constant-control cells; anneal cells wider than max_step are
  // subdivided. Returns (s, dt) pairs covering [0, t_f] in order.
  std::vector<std::pair<double, double>> constant_cells(double max_step) const;

 private:
  std::vector<Arc> arcs_;
  double total_ = 0.0;
  int dropped_ = 0;
};

}  // namespace qoc
