#pragma once

#include <vector>

#include "mpath/allocation.h"
#include "mpath/graph.h"
#include "mpath/paths.h"

namespace mpath {

enum class CostKind { kMM1, kLinear };

// M/M/1 delay-shaped cost x/(c-x) on absolute flow and capacity.
// Throws SaturatedLink when flow >= capacity.
double mm1_link_cost(double flow, double capacity);
// d/dx of x/(c-x) = c/(c-x)^2.
double mm1_link_cost_derivative(double flow, double capacity);
double mm1_link_cost_second_derivative(double flow, double capacity);

// Sum of per-link cost derivatives at the given aggregate link flows.
double first_derivative_length(const NetworkGraph& graph, const Path& path,
                               const std::vector<double>& link_flow,
                               CostKind kind = CostKind::kMM1);
double first_derivative_length(const NetworkGraph& graph, const Path& path,
                               const LinkAllocation& alloc, CostKind kind = CostKind::kMM1);

double total_network_cost(const std::vector<double>& link_flow, const NetworkGraph& graph,
                          CostKind kind);
double total_network_cost(const LinkAllocation& alloc, const NetworkGraph& graph, CostKind kind);

// Global goodput over consumed link bandwidth; 0 when nothing is sent.
double goodput_to_cost_ratio(const PathAllocation& alloc);

// Sum over links of aggregate flow (each bit counted once per hop).
double consumed_bandwidth(const PathAllocation& alloc);

}  // namespace mpath
