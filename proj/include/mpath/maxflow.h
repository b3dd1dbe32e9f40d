#pragma once

#include <vector>

#include "mpath/graph.h"

namespace mpath {

// Single-commodity max-flow value from source to sink using the given
// per-link capacities (links with capacity <= 0 are treated as absent).
double max_flow(const NetworkGraph& graph, const std::vector<double>& capacities, NodeId source,
                NodeId sink);

inline double max_flow(const NetworkGraph& graph, NodeId source, NodeId sink) {
  return max_flow(graph, graph.capacities(), source, sink);
}

}  // namespace mpath
