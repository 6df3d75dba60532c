#include "qoc/schedule.hpp"

#include <cmath>

#include "qoc/errors.hpp"

namespace qoc {

namespace {

double snap_bang(double s) {
  if (std::abs(s) < 1e-9) return 0.0;
  if (std::abs(s - 1.0) < 1e-9) return 1.0;
  throw ValidationError("Schedule: bang value must be 0 or 1, got " +
                        std::to_string(s));
}

double clip_sample(double s) {
  if (s < -1e-9 || s > 1.0 + 1e-9)
    throw ValidationError("Schedule: anneal sample out of [0,1]: " +
                          std::to_string(s));
  return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
}

}  // namespace

Schedule::Schedule(std::vector<Arc> arcs) {
  for (auto& arc : arcs) {
    double dt = std::visit([](const auto& a) { return a.duration; }, arc);
    if (!(dt >= 0.0) || !std::isfinite(dt))
      throw ValidationError("Schedule: arc duration must be finite and >= 0");
    if (dt == 0.0) {
      ++dropped_;
      continue;
    }
    if (auto* b = std::get_if<BangArc>(&arc)) {
      b->s = snap_bang(b->s);
    } else {
      auto& a = std::get<AnnealArc>(arc);
      if (a.samples.empty())
        throw ValidationError("Schedule: anneal arc needs at least one sample");
      for (double& s : a.samples) s = clip_sample(s);
    }
    total_ += dt;
    arcs_.push_back(std::move(arc));
  }
}

Schedule Schedule::bangs(int start_value, const std::vector<double>& durations) {
  std::vector<Arc> arcs;
  double v = start_value ? 1.0 : 0.0;
  for (double d : durations) {
    arcs.push_back(BangArc{v, d});
    v = 1.0 - v;
  }
  return Schedule(std::move(arcs));
}

Schedule Schedule::discretized(const std::vector<double>& samples, double t_f) {
  if (t_f == 0.0 || samples.empty()) return Schedule(std::vector<Arc>{});
  return Schedule(std::vector<Arc>{AnnealArc{samples, t_f}});
}

double Schedule::s_at(double t) const {
  if (arcs_.empty()) return 0.0;
  double t0 = 0.0;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    double dt = std::visit([](const auto& a) { return a.duration; }, arcs_[i]);
    bool last = (i + 1 == arcs_.size());
    if (t < t0 + dt || last) {
      if (const auto* b = std::get_if<BangArc>(&arcs_[i])) return b->s;
      const auto& a = std::get<AnnealArc>(arcs_[i]);
      double frac = (t - t0) / dt;
      int cell = static_cast<int>(frac * static_cast<double>(a.samples.size()));
      if (cell < 0) cell = 0;
      if (cell >= static_cast<int>(a.samples.size()))
        cell = static_cast<int>(a.samples.size()) - 1;
      return a.samples[cell];
    }
    t0 += dt;
  }
  return 0.0;
}

std::vector<std::pair<double, double>> Schedule::constant_cells(
    double max_step) const {
  std::vector<std::pair<double, double>> cells;
  for (const auto& arc : arcs_) {
    if (const auto* b = std::get_if<BangArc>(&arc)) {
      cells.emplace_back(b->s, b->duration);
      continue;
    }
    const auto& a = std::get<AnnealArc>(arc);
    double w = a.duration / static_cast<double>(a.samples.size());
    int split = 1;
    if (max_step > 0.0 && w > max_step)
      split = static_cast<int>(std::ceil(w / max_step));
    for (double s : a.samples)
      for (int k = 0; k < split; ++k) cells.emplace_back(s, w / split);
  }
  return cells;
}

}  // namespace qoc
