#include <algorithm>

#include <fmt/format.h>

#include "mpath/error.h"
#include "mpath/maxmin.h"
#include "mpath/paths.h"

namespace mpath {

MaxMinResult mincost_singlepath_allocate(const NetworkGraph& graph, const DemandSet& demands) {
  validate_demands(graph, demands);
  const std::size_t n = demands.size();
  const double S = graph.max_capacity();
  std::vector<Path> route;
  std::vector<double> peak;
  for (const Demand& d : demands) {
    route.push_back(enumerate_paths(graph, d, 1, 0, PathOrder::kInverseCapacity).front());
    peak.push_back(d.peak_at(0.0));
    if (!(peak.back() > 0)) {
      throw Error(ErrorCode::kInvalidDemand, fmt::format("demand {} is inactive at t=0", d.id));
    }
  }

  MaxMinResult result;
  std::vector<double> rate(n, 0.0);
  std::vector<char> active(n, 1);
  std::vector<double> residual = graph.capacities();
  double level = 0;
  while (std::any_of(active.begin(), active.end(), [](char a) { return a != 0; })) {
    std::vector<int> users(graph.num_links(), 0);
    double z = kElastic;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      z = std::min(z, peak[i] - rate[i]);
      for (LinkIndex l : route[i].links) ++users[l];
    }
    for (LinkIndex l = 0; l < graph.num_links(); ++l) {
      if (users[l] > 0) z = std::min(z, residual[l] / users[l]);
    }
    z = std::max(z, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      rate[i] += z;
      for (LinkIndex l : route[i].links) residual[l] -= z;
    }
    level += z;
    MaxMinIteration it;
    it.z_bps = z;
    it.level_bps = level;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      bool at_peak = !is_elastic(peak[i]) && rate[i] >= peak[i] - kFreezeTolerance * S;
      bool saturated = std::any_of(route[i].links.begin(), route[i].links.end(), [&](LinkIndex l) {
        return residual[l] <= kFreezeTolerance * S;
      });
      if (at_peak || saturated) {
        active[i] = 0;
        it.frozen_ids.push_back(demands[i].id);
      }
    }
    for (double& r : residual) r = std::max(r, 0.0);
    it.residual_capacity = residual;
    if (it.frozen_ids.empty()) {
      throw Error(ErrorCode::kNumericalFailure, "single-path water-filling made no progress");
    }
    result.trace.iterations.push_back(std::move(it));
  }

  result.allocation = LinkAllocation(demands, graph.num_links());
  for (std::size_t i = 0; i < n; ++i) {
    result.allocation.totals[i] = rate[i];
    for (LinkIndex l : route[i].links) result.allocation.rates[i][l] = rate[i];
  }
  return result;
}

}  // namespace mpath
