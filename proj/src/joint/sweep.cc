#include <fmt/format.h>

#include "mpath/error.h"
#include "mpath/joint.h"
#include "mpath/scenarios.h"

namespace mpath {

SweepPoint solve_toy(const std::string& topology, double ratio, const SweepSettings& settings) {
  if (topology != "triangle" && topology != "square") {
    throw Error(ErrorCode::kUnknownTopology,
                fmt::format("sweep needs triangle or square, got '{}'", topology));
  }
  if (!(ratio >= 1 && ratio <= 15)) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("ratio {} outside [1, 15]", ratio));
  }
  JointProblem problem;
  problem.graph = make_toy_topology(topology, settings.base_capacity_bps, ratio);
  problem.demands = toy_demands();
  for (const Demand& d : problem.demands) {
    // Small enough to list every simple path of the square.
    problem.paths.push_back(enumerate_paths(problem.graph, d, 64, 3));
  }
  problem.utility.alpha = settings.alpha;
  problem.utility_unit_bps = settings.utility_unit_bps;

  SweepPoint point;
  point.ratio = ratio;
  problem.mode = Coordination::kCoordinated;
  point.coordinated = solve_coordinated(problem);
  problem.mode = Coordination::kUncoordinated;
  point.uncoordinated = solve_uncoordinated(problem);
  return point;
}

std::vector<SweepPoint> sweep_capacity_ratio(const SweepSettings& settings) {
  std::vector<SweepPoint> out;
  for (double r : settings.ratios) out.push_back(solve_toy(settings.topology, r, settings));
  return out;
}

}  // namespace mpath
