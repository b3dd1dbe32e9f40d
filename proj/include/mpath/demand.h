#pragma once

#include <limits>
#include <vector>

#include "mpath/graph.h"

namespace mpath {

// Elastic sentinel: compares as +inf everywhere.
inline constexpr double kElastic = std::numeric_limits<double>::infinity();

inline bool is_elastic(double peak) { return peak == kElastic; }

struct PeakStep {
  double t_start_s = 0;
  double peak_bps = kElastic;

  bool operator==(const PeakStep&) const = default;
};

// Piecewise-constant peak rate. Before the first breakpoint the demand is
// inactive (peak 0).
class PeakSchedule {
 public:
  PeakSchedule() : steps_{{0.0, kElastic}} {}
  explicit PeakSchedule(std::vector<PeakStep> steps);
  static PeakSchedule constant(double peak_bps) { return PeakSchedule({{0.0, peak_bps}}); }

  double at(double t_s) const;
  const std::vector<PeakStep>& steps() const { return steps_; }
  // Breakpoint times after t0, in order.
  std::vector<double> breakpoints() const;

  bool operator==(const PeakSchedule&) const = default;

 private:
  std::vector<PeakStep> steps_;
};

struct Demand {
  int id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  PeakSchedule peak;

  double peak_at(double t_s) const { return peak.at(t_s); }
  bool operator==(const Demand&) const = default;
};

using DemandSet = std::vector<Demand>;

// Throws InvalidDemand: unknown endpoints, source == destination, repeated id.
void validate_demands(const NetworkGraph& graph, const DemandSet& demands);

// Same demands with constant peaks frozen at time t.
DemandSet demands_at(const DemandSet& demands, double t_s);

}  // namespace mpath
