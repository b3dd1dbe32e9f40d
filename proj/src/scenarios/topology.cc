#include <random>
#include <sstream>

#include <fmt/format.h>

#include "mpath/error.h"
#include "mpath/scenarios.h"

namespace mpath {
namespace detail {
extern const char* const kAbileneData;
}  // namespace detail

namespace {

constexpr double kDefaultLatency = 1e-3;

struct Edge {
  NodeId a, b;
  double capacity_scale = 1.0;
  double latency = kDefaultLatency;
};

NetworkGraph from_edges(std::vector<NodeId> nodes, const std::vector<Edge>& edges, double mean,
                        std::uint64_t seed, bool noise) {
  std::seed_seq seq{seed, std::uint64_t{0x70b0}};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(mean, mean / 10.0);
  std::vector<Link> undirected;
  for (const Edge& e : edges) {
    double c = mean * e.capacity_scale;
    if (noise) {
      do {
        c = normal(rng);
      } while (c < 0.5 * mean || c > 1.6 * mean);
    }
    undirected.push_back({e.a, e.b, c, e.latency});
  }
  return build_graph(std::move(nodes), bidirectional(undirected));
}

std::vector<NodeId> range_nodes(int n) {
  std::vector<NodeId> out;
  for (int i = 1; i <= n; ++i) out.push_back(i);
  return out;
}

std::vector<Edge> full_mesh(int n) {
  std::vector<Edge> out;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) out.push_back({i, j});
  }
  return out;
}

void parse_abilene(std::vector<NodeId>* nodes, std::vector<Edge>* edges) {
  std::istringstream in(detail::kAbileneData);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind[0] == '#') continue;
    if (kind == "node") {
      NodeId id;
      ls >> id;
      nodes->push_back(id);
    } else if (kind == "link") {
      Edge e;
      ls >> e.a >> e.b;
      edges->push_back(e);
    }
  }
}

// Dual-homed five-node network: every pair (1,2), (3,2), (4,5) has exactly
// four simple paths. Mb/s and seconds.
const std::vector<Edge>& case_study_edges() {
  static const std::vector<Edge> edges = {
      {1, 2, 80e6, 0.005}, {1, 5, 70e6, 0.001}, {2, 3, 40e6, 0.001}, {2, 4, 60e6, 0.003},
      {2, 5, 100e6, 0.005}, {3, 5, 20e6, 0.002}, {4, 5, 80e6, 0.005},
  };
  return edges;
}

}  // namespace

NetworkGraph make_topology(const std::string& name, double mean_capacity_bps,
                           std::uint64_t seed, bool capacity_noise) {
  if (!(mean_capacity_bps > 0)) {
    throw Error(ErrorCode::kNonPositiveCapacity, "mean capacity must be positive");
  }
  if (name == "triangle") {
    return from_edges(range_nodes(3), full_mesh(3), mean_capacity_bps, seed, capacity_noise);
  }
  if (name == "square") {
    return from_edges(range_nodes(4), full_mesh(4), mean_capacity_bps, seed, capacity_noise);
  }
  if (name == "case_study") {
    std::vector<Link> links;
    for (const Edge& e : case_study_edges()) links.push_back({e.a, e.b, e.capacity_scale, e.latency});
    return build_graph(range_nodes(5), bidirectional(links));
  }
  if (name == "abilene") {
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    parse_abilene(&nodes, &edges);
    return from_edges(std::move(nodes), edges, mean_capacity_bps, seed, capacity_noise);
  }
  if (name == "wireless_mesh") {
    // 4x4 grid, row-major ids, row and column neighbours only.
    std::vector<Edge> edges;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        int id = r * 4 + c + 1;
        if (c < 3) edges.push_back({id, id + 1});
        if (r < 3) edges.push_back({id, id + 4});
      }
    }
    return from_edges(range_nodes(16), edges, mean_capacity_bps, seed, capacity_noise);
  }
  throw Error(ErrorCode::kUnknownTopology, fmt::format("unknown topology '{}'", name));
}

NetworkGraph make_toy_topology(const std::string& name, double capacity_bps, double ratio) {
  int n = name == "triangle" ? 3 : name == "square" ? 4 : 0;
  if (n == 0) throw Error(ErrorCode::kUnknownTopology, fmt::format("'{}' is not a toy topology", name));
  std::vector<Edge> edges = full_mesh(n);
  for (Edge& e : edges) {
    if ((e.a == 1 && e.b == 2) || (e.a == 1 && e.b == 3)) e.capacity_scale = ratio;
  }
  return from_edges(range_nodes(n), edges, capacity_bps, 0, false);
}

DemandSet toy_demands() {
  return {{1, 1, 2, PeakSchedule::constant(kElastic)}, {2, 3, 2, PeakSchedule::constant(kElastic)}};
}

DemandSet case_study_demands() {
  return {
      {1, 1, 2, PeakSchedule({{10.0, 70e6}, {18.0, kElastic}})},
      {2, 3, 2, PeakSchedule({{5.0, 30e6}, {18.0, kElastic}})},
      {3, 4, 5, PeakSchedule({{0.0, 50e6}, {40.0, kElastic}, {60.0, 55e6}})},
  };
}

std::vector<double> case_study_epochs() { return {0, 5, 10, 18, 25, 40, 60, 80}; }

}  // namespace mpath
