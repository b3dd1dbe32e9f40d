#include "mpath/cost.h"

#include <fmt/format.h>

#include "mpath/error.h"

namespace mpath {
namespace {

void check_below(double flow, double capacity) {
  if (!(flow < capacity)) {
    throw Error(ErrorCode::kSaturatedLink,
                fmt::format("flow {} reaches capacity {}", flow, capacity));
  }
}

}  // namespace

double mm1_link_cost(double flow, double capacity) {
  check_below(flow, capacity);
  return flow / (capacity - flow);
}

double mm1_link_cost_derivative(double flow, double capacity) {
  check_below(flow, capacity);
  double gap = capacity - flow;
  return capacity / (gap * gap);
}

double mm1_link_cost_second_derivative(double flow, double capacity) {
  check_below(flow, capacity);
  double gap = capacity - flow;
  return 2.0 * capacity / (gap * gap * gap);
}

double first_derivative_length(const NetworkGraph& graph, const Path& path,
                               const std::vector<double>& link_flow, CostKind kind) {
  double len = 0;
  for (LinkIndex l : path.links) {
    double c = graph.link(l).capacity_bps;
    len += kind == CostKind::kMM1 ? mm1_link_cost_derivative(link_flow[l], c) : 1.0 / c;
  }
  return len;
}

double first_derivative_length(const NetworkGraph& graph, const Path& path,
                               const LinkAllocation& alloc, CostKind kind) {
  std::vector<double> flow =
      alloc.num_demands() ? alloc.aggregate() : std::vector<double>(graph.num_links(), 0.0);
  return first_derivative_length(graph, path, flow, kind);
}

double total_network_cost(const std::vector<double>& link_flow, const NetworkGraph& graph,
                          CostKind kind) {
  double total = 0;
  for (LinkIndex l = 0; l < graph.num_links(); ++l) {
    double c = graph.link(l).capacity_bps;
    total += kind == CostKind::kMM1 ? mm1_link_cost(link_flow[l], c) : link_flow[l] / c;
  }
  return total;
}

double total_network_cost(const LinkAllocation& alloc, const NetworkGraph& graph, CostKind kind) {
  if (alloc.num_demands() == 0) return 0.0;
  return total_network_cost(alloc.aggregate(), graph, kind);
}

double consumed_bandwidth(const PathAllocation& alloc) {
  double used = 0;
  for (const PathRates& pr : alloc) {
    for (std::size_t k = 0; k < pr.paths.size(); ++k) {
      used += pr.rates[k] * static_cast<double>(pr.paths[k].hops());
    }
  }
  return used;
}

double goodput_to_cost_ratio(const PathAllocation& alloc) {
  double goodput = 0;
  for (const PathRates& pr : alloc) goodput += pr.total();
  double used = consumed_bandwidth(alloc);
  if (used == 0) return 0.0;
  return goodput / used;
}

}  // namespace mpath
