#pragma once

#include <vector>

#include "mpath/allocation.h"
#include "mpath/demand.h"
#include "mpath/graph.h"

namespace mpath {

struct MaxMinIteration {
  double z_bps = 0;            // common increment of this round
  double level_bps = 0;        // cumulative share after the round
  std::vector<int> frozen_ids;
  std::vector<double> residual_capacity;  // c - routed flow, per link
};

struct MaxMinTrace {
  std::vector<MaxMinIteration> iterations;
};

struct MaxMinResult {
  LinkAllocation allocation;
  MaxMinTrace trace;

  double total(int demand_id) const;
  std::vector<double> totals() const { return allocation.totals; }
};

// Capacities left after routing; removed links have capacity 0.
struct ResidualGraph {
  std::vector<double> capacity;
  std::vector<char> removed;
};

// Rates are handled in units of this scale (the largest capacity); every
// "1e-9" tolerance below is relative to it.
inline constexpr double kFreezeTolerance = 1e-9;

// One water-filling round over the node-link formulation. Demands keep their
// current totals (`levels`, bit/s); active ones grow by a common z, which is
// maximized first, then linear cost sum(flow/c) is minimized with z held.
// All demands are re-routed on the original capacities, so routing chosen in
// earlier rounds can change (this is what keeps the result max-min fair).
struct FillResult {
  double z_bps = 0;
  LinkAllocation routing;  // every demand, at levels + z for active ones
};
FillResult maxmin_fill_iteration(const NetworkGraph& graph, const DemandSet& demands,
                                 const std::vector<double>& levels,
                                 const std::vector<char>& active);

// c~ = c - routed; links at or below 1e-9 of the original are removed.
// Throws NegativeResidual when routed flow exceeds a capacity by more than
// the tolerance.
ResidualGraph reduce_to_residual(const NetworkGraph& graph, const LinkAllocation& routed);

// Peak reached, or no augmenting path on the residual graph.
bool is_demand_frozen(const NetworkGraph& graph, const ResidualGraph& residual,
                      const Demand& demand, double current_rate);

// Exact blocking probe: can `demand` grow by more than the tolerance while
// all other demands keep their totals, allowing every demand to be re-routed?
bool can_grow_with_rerouting(const NetworkGraph& graph, const DemandSet& demands,
                             const std::vector<double>& levels, std::size_t which);

MaxMinResult maxmin_multipath_allocate(const NetworkGraph& graph, const DemandSet& demands);

// Baseline: each demand pinned to its min sum(1/c) path, then water-filling.
MaxMinResult mincost_singlepath_allocate(const NetworkGraph& graph, const DemandSet& demands);

// x/p per demand; elastic demands are scored against their empty-network
// max-flow. Clamped to [0, 1].
std::vector<double> satisfaction_profile(const NetworkGraph& graph, const DemandSet& demands,
                                         const std::vector<double>& totals);

}  // namespace mpath
