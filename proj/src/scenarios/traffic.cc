#include <algorithm>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "mpath/error.h"
#include "mpath/paths.h"
#include "mpath/scenarios.h"

namespace mpath {
namespace {

constexpr double kPeakMu = 16.6;
constexpr double kPeakSigma = 1.04;

}  // namespace

std::vector<double> sample_peak_rates(std::size_t count, std::uint64_t seed) {
  std::seed_seq seq{seed, std::uint64_t{0x9ea4}};
  std::mt19937_64 rng(seq);
  std::lognormal_distribution<double> dist(kPeakMu, kPeakSigma);
  std::vector<double> out(count);
  for (double& v : out) v = dist(rng);
  return out;
}

DemandSet uniform_traffic_matrix(const NetworkGraph& graph, std::uint64_t seed) {
  std::vector<NodeId> nodes = graph.nodes();
  std::sort(nodes.begin(), nodes.end());
  if (nodes.size() < 2) throw Error(ErrorCode::kInvalidGraph, "need at least two nodes");
  struct Pair {
    NodeId s, t;
    double bottleneck;
  };
  std::vector<Pair> pairs;
  for (NodeId s : nodes) {
    for (NodeId t : nodes) {
      if (s == t) continue;
      Demand probe{0, s, t, PeakSchedule::constant(kElastic)};
      Path p = enumerate_paths(graph, probe, 1, 0, PathOrder::kInverseCapacity).front();
      double b = kElastic;
      for (LinkIndex l : p.links) b = std::min(b, graph.link(l).capacity_bps);
      pairs.push_back({s, t, b});
    }
  }
  std::vector<double> peaks = sample_peak_rates(pairs.size(), seed);
  std::sort(peaks.begin(), peaks.end(), std::greater<>());
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].bottleneck > pairs[b].bottleneck;
  });
  std::vector<double> assigned(pairs.size());
  for (std::size_t r = 0; r < order.size(); ++r) assigned[order[r]] = peaks[r];
  DemandSet out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.push_back({static_cast<int>(i + 1), pairs[i].s, pairs[i].t,
                   PeakSchedule::constant(assigned[i])});
  }
  return out;
}

DemandSet hotspot_traffic_matrix(const NetworkGraph& graph, int sources, int flows_per_source,
                                 NodeId sink, std::uint64_t seed) {
  if (!graph.has_node(sink)) {
    throw Error(ErrorCode::kInvalidSink, fmt::format("sink {} is not in the graph", sink));
  }
  if (sources < 1 || static_cast<std::size_t>(sources) >= graph.num_nodes() ||
      flows_per_source < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                fmt::format("need 1 <= sources < {} and flows_per_source >= 1", graph.num_nodes()));
  }
  std::vector<NodeId> candidates;
  for (NodeId n : graph.nodes()) {
    if (n != sink) candidates.push_back(n);
  }
  std::sort(candidates.begin(), candidates.end());
  std::seed_seq seq{seed, std::uint64_t{0x5e1c}};
  std::mt19937_64 rng(seq);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(sources);
  std::sort(candidates.begin(), candidates.end());

  std::vector<double> peaks =
      sample_peak_rates(static_cast<std::size_t>(sources) * flows_per_source, seed);
  DemandSet out;
  int id = 1;
  for (NodeId s : candidates) {
    for (int k = 0; k < flows_per_source; ++k, ++id) {
      out.push_back({id, s, sink, PeakSchedule::constant(peaks[id - 1])});
    }
  }
  return out;
}

}  // namespace mpath
