#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpath/demand.h"
#include "mpath/graph.h"

namespace mpath {

// triangle, square, case_study, abilene, wireless_mesh.
// With noise, capacities ~ Normal(C, C/10) redrawn until inside
// [0.5 C, 1.6 C]; both directions of a link share one draw.
// case_study ignores mean_capacity_bps (its capacities are fixed).
NetworkGraph make_topology(const std::string& name, double mean_capacity_bps,
                           std::uint64_t seed, bool capacity_noise = false);

// Triangle or square full mesh with links {1,2} and {3,1} scaled by ratio.
NetworkGraph make_toy_topology(const std::string& name, double capacity_bps, double ratio);

// Demands 1->2 and 3->2, both elastic.
DemandSet toy_demands();

// Table-3 peak schedule on the case-study topology (pairs 1-2, 3-2, 4-5).
DemandSet case_study_demands();
// Epoch boundaries of the schedule, including 0 and the 80 s horizon.
std::vector<double> case_study_epochs();

// Node ids of the shipped Abilene map and the mesh gateway default.
inline constexpr NodeId kDefaultSink = 6;

// exp(Normal(16.6, 1.04)) in bit/s.
std::vector<double> sample_peak_rates(std::size_t count, std::uint64_t seed);

// One demand per ordered pair; largest peaks go to the pairs whose
// empty-network min-cost path has the largest bottleneck.
DemandSet uniform_traffic_matrix(const NetworkGraph& graph, std::uint64_t seed);

// `sources` distinct random nodes (sink excluded), `flows_per_source`
// demands each toward `sink`. Throws InvalidSink.
DemandSet hotspot_traffic_matrix(const NetworkGraph& graph, int sources, int flows_per_source,
                                 NodeId sink, std::uint64_t seed);

enum class TrafficPattern { kUniform, kHotspot };

struct ScenarioSpec {
  std::string topology = "abilene";
  double mean_capacity_bps = 100e6;
  bool capacity_noise = true;
  TrafficPattern pattern = TrafficPattern::kHotspot;
  int sources = 4;
  int flows_per_source = 25;
  NodeId sink = kDefaultSink;
  std::uint64_t seed = 1;
  int runs = 10;
};

struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  DemandSet demands;
  std::vector<double> multipath_rate;
  std::vector<double> mincost_rate;
  std::vector<double> multipath_satisfaction;
  std::vector<double> mincost_satisfaction;
  double multipath_carried = 0;
  double mincost_carried = 0;
  double gain = 0;
};

struct DecileStats {
  int decile = 0;  // 0 = smallest peaks
  double multipath_mean = 0;
  double multipath_variance = 0;
  double mincost_mean = 0;
  double mincost_variance = 0;
};

struct ExperimentReport {
  ScenarioSpec spec;
  std::vector<RunRecord> runs;
  double multipath_mean_carried = 0;
  double mincost_mean_carried = 0;
  double mean_gain = 0;
  double multipath_satisfaction_variance = 0;
  double mincost_satisfaction_variance = 0;
  std::vector<DecileStats> deciles;
};

// Run r uses seed spec.seed + r for both topology noise and traffic.
ExperimentReport run_benchmark_suite(const ScenarioSpec& spec);

}  // namespace mpath
