#pragma once

#include <vector>

#include "mpath/demand.h"
#include "mpath/graph.h"
#include "mpath/paths.h"

namespace mpath {

// Per-path rates x_k^d of one demand.
struct PathRates {
  int demand_id = 0;
  PathSet paths;
  std::vector<double> rates;

  double total() const;
};

using PathAllocation = std::vector<PathRates>;

// Per-demand per-link rates x_ij^d. rates[i] is indexed by LinkIndex and
// belongs to demand_ids[i]; totals[i] is phi^d.
struct LinkAllocation {
  std::vector<int> demand_ids;
  std::vector<std::vector<double>> rates;
  std::vector<double> totals;

  LinkAllocation() = default;
  LinkAllocation(const DemandSet& demands, std::size_t num_links);

  std::size_t num_demands() const { return demand_ids.size(); }
  // Aggregate flow per link.
  std::vector<double> aggregate() const;
  // Index of a demand id, or -1.
  int position(int demand_id) const;
};

LinkAllocation expand_to_links(const PathAllocation& paths, const NetworkGraph& graph);

// Aggregate per-link flow straight from path rates.
std::vector<double> path_link_aggregates(const PathAllocation& paths, const NetworkGraph& graph);

// rho_ij = sum_d x_ij^d / c_ij. Loads above 1 are reported, not rejected.
std::vector<double> link_loads(const LinkAllocation& alloc, const NetworkGraph& graph);

// Largest per-node net-flow mismatch of each demand (absolute, bit/s) given
// its total: +phi at source, -phi at sink, 0 elsewhere.
std::vector<double> conservation_residuals(const LinkAllocation& alloc,
                                           const NetworkGraph& graph,
                                           const DemandSet& demands);

// Splits a link flow into source->sink paths, fewest hops first (greedy
// decomposition on the positive-flow subgraph). Cycles are dropped.
struct FlowPath {
  std::vector<LinkIndex> links;
  double rate = 0;
};
std::vector<FlowPath> decompose_flow(const NetworkGraph& graph, const std::vector<double>& flow,
                                     NodeId source, NodeId sink, double tolerance);

// In-place variant: pulls at most `limit` out of `flow`, which may carry
// other sources' flow toward the same sink.
std::vector<FlowPath> extract_paths(const NetworkGraph& graph, std::vector<double>& flow,
                                    NodeId source, NodeId sink, double limit, double tolerance);

}  // namespace mpath
