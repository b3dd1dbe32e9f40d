#include "mpath/paths.h"

#include <algorithm>
#include <queue>

#include <fmt/format.h>

#include "mpath/error.h"

namespace mpath {
namespace {

struct Partial {
  std::vector<NodeId> nodes;
  std::vector<LinkIndex> links;
  double inv_cap = 0;
};

struct Key {
  double first;
  double second;
};

bool before(const Partial& a, const Partial& b, PathOrder order) {
  double ah = static_cast<double>(a.links.size()), bh = static_cast<double>(b.links.size());
  Key ka = order == PathOrder::kHopsFirst ? Key{ah, a.inv_cap} : Key{a.inv_cap, ah};
  Key kb = order == PathOrder::kHopsFirst ? Key{bh, b.inv_cap} : Key{b.inv_cap, bh};
  if (ka.first != kb.first) return ka.first < kb.first;
  if (ka.second != kb.second) return ka.second < kb.second;
  return a.nodes < b.nodes;
}

}  // namespace

double inverse_capacity_length(const NetworkGraph& graph, const std::vector<LinkIndex>& links) {
  std::vector<double> terms;
  terms.reserve(links.size());
  for (LinkIndex l : links) terms.push_back(1.0 / graph.link(l).capacity_bps);
  std::sort(terms.begin(), terms.end());
  double s = 0;
  for (double t : terms) s += t;
  return s;
}

PathSet enumerate_paths(const NetworkGraph& graph, const Demand& demand, int max_paths,
                        int max_hops, PathOrder order) {
  if (max_paths < 1) throw Error(ErrorCode::kInvalidConfig, "max_paths must be >= 1");
  const std::size_t hop_limit =
      max_hops > 0 ? static_cast<std::size_t>(max_hops) : graph.num_nodes() - 1;
  std::size_t s = graph.node_index(demand.source);
  graph.node_index(demand.destination);

  auto worse = [order](const Partial& a, const Partial& b) { return before(b, a, order); };
  std::priority_queue<Partial, std::vector<Partial>, decltype(worse)> open(worse);
  open.push(Partial{{graph.nodes()[s]}, {}, 0.0});

  PathSet out;
  while (!open.empty() && out.size() < static_cast<std::size_t>(max_paths)) {
    Partial p = open.top();
    open.pop();
    if (p.nodes.back() == demand.destination) {
      Path path;
      path.demand_id = demand.id;
      path.index = static_cast<int>(out.size());
      path.links = std::move(p.links);
      path.nodes = std::move(p.nodes);
      out.push_back(std::move(path));
      continue;
    }
    if (p.links.size() >= hop_limit) continue;
    std::size_t u = graph.node_index(p.nodes.back());
    for (LinkIndex l : graph.out_links(u)) {
      NodeId v = graph.link(l).dst;
      if (std::find(p.nodes.begin(), p.nodes.end(), v) != p.nodes.end()) continue;
      Partial q = p;
      q.nodes.push_back(v);
      q.links.push_back(l);
      q.inv_cap = inverse_capacity_length(graph, q.links);
      open.push(std::move(q));
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::kNoPathExists,
                fmt::format("no path for demand {} ({} -> {}) within {} hops", demand.id,
                            demand.source, demand.destination, hop_limit));
  }
  return out;
}

void validate_path(const NetworkGraph& graph, const Demand& demand, const Path& path) {
  if (path.links.empty() || path.nodes.size() != path.links.size() + 1) {
    throw Error(ErrorCode::kInvalidGraph, "malformed path");
  }
  if (path.nodes.front() != demand.source || path.nodes.back() != demand.destination) {
    throw Error(ErrorCode::kInvalidGraph, "path endpoints do not match the demand");
  }
  for (std::size_t i = 0; i < path.links.size(); ++i) {
    const Link& l = graph.link(path.links[i]);
    if (l.src != path.nodes[i] || l.dst != path.nodes[i + 1]) {
      throw Error(ErrorCode::kInvalidGraph, "path links are not consecutive");
    }
  }
  std::vector<NodeId> sorted = path.nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidGraph, "path repeats a node");
  }
}

}  // namespace mpath
