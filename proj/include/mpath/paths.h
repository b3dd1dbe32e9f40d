#pragma once

#include <vector>

#include "mpath/demand.h"
#include "mpath/graph.h"

namespace mpath {

struct Path {
  int demand_id = 0;
  int index = 0;
  std::vector<LinkIndex> links;
  std::vector<NodeId> nodes;  // links.size() + 1 entries

  std::size_t hops() const { return links.size(); }
  bool operator==(const Path&) const = default;
};

using PathSet = std::vector<Path>;

enum class PathOrder {
  kHopsFirst,         // (hops, sum 1/c, node sequence)
  kInverseCapacity,   // (sum 1/c, hops, node sequence)
};

// Up to max_paths simple paths from demand source to destination with at most
// max_hops links, best first. max_hops <= 0 means |N|-1. Throws NoPathExists.
PathSet enumerate_paths(const NetworkGraph& graph, const Demand& demand, int max_paths,
                        int max_hops = 0, PathOrder order = PathOrder::kHopsFirst);

// Sum of 1/c over the path, terms added in ascending order.
double inverse_capacity_length(const NetworkGraph& graph, const std::vector<LinkIndex>& links);

// Throws InvalidGraph unless links form a simple source->destination walk.
void validate_path(const NetworkGraph& graph, const Demand& demand, const Path& path);

}  // namespace mpath
