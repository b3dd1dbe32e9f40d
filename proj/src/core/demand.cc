#include "mpath/demand.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "mpath/error.h"

namespace mpath {

PeakSchedule::PeakSchedule(std::vector<PeakStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw Error(ErrorCode::kInvalidDemand, "empty peak schedule");
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const PeakStep& s = steps_[i];
    if (!std::isfinite(s.t_start_s) || s.t_start_s < 0) {
      throw Error(ErrorCode::kInvalidDemand,
                  fmt::format("bad schedule breakpoint {}", s.t_start_s));
    }
    if (i > 0 && !(s.t_start_s > steps_[i - 1].t_start_s)) {
      throw Error(ErrorCode::kInvalidDemand, "schedule breakpoints must strictly increase");
    }
    if (!(s.peak_bps > 0)) {
      throw Error(ErrorCode::kInvalidDemand, fmt::format("peak {} is not positive", s.peak_bps));
    }
  }
}

double PeakSchedule::at(double t_s) const {
  if (t_s < steps_.front().t_start_s) return 0.0;
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t_s,
                             [](double t, const PeakStep& s) { return t < s.t_start_s; });
  return std::prev(it)->peak_bps;
}

std::vector<double> PeakSchedule::breakpoints() const {
  std::vector<double> out;
  for (const PeakStep& s : steps_) out.push_back(s.t_start_s);
  return out;
}

void validate_demands(const NetworkGraph& graph, const DemandSet& demands) {
  std::set<int> ids;
  for (const Demand& d : demands) {
    if (!ids.insert(d.id).second) {
      throw Error(ErrorCode::kInvalidDemand, fmt::format("duplicate demand id {}", d.id));
    }
    if (!graph.has_node(d.source) || !graph.has_node(d.destination)) {
      throw Error(ErrorCode::kInvalidDemand,
                  fmt::format("demand {} references an unknown node", d.id));
    }
    if (d.source == d.destination) {
      throw Error(ErrorCode::kInvalidDemand,
                  fmt::format("demand {} has source == destination", d.id));
    }
  }
}

DemandSet demands_at(const DemandSet& demands, double t_s) {
  DemandSet out;
  for (const Demand& d : demands) {
    double p = d.peak_at(t_s);
    if (p <= 0) continue;
    out.push_back({d.id, d.source, d.destination, PeakSchedule::constant(p)});
  }
  return out;
}

}  // namespace mpath
