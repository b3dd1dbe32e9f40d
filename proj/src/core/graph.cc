#include "mpath/graph.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mpath/error.h"

namespace mpath {

bool NetworkGraph::has_node(NodeId id) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), std::make_pair(id, std::size_t{0}));
  return it != index_.end() && it->first == id;
}

std::size_t NetworkGraph::node_index(NodeId id) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), std::make_pair(id, std::size_t{0}));
  if (it == index_.end() || it->first != id) {
    throw Error(ErrorCode::kInvalidGraph, fmt::format("unknown node {}", id));
  }
  return it->second;
}

std::optional<LinkIndex> NetworkGraph::find_link(NodeId src, NodeId dst) const {
  if (!has_node(src)) return std::nullopt;
  for (LinkIndex l : out_[node_index(src)]) {
    if (links_[l].dst == dst) return l;
  }
  return std::nullopt;
}

std::vector<double> NetworkGraph::capacities() const {
  std::vector<double> caps;
  caps.reserve(links_.size());
  for (const Link& l : links_) caps.push_back(l.capacity_bps);
  return caps;
}

double NetworkGraph::min_capacity() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Link& l : links_) m = std::min(m, l.capacity_bps);
  return m;
}

double NetworkGraph::max_capacity() const {
  double m = 0;
  for (const Link& l : links_) m = std::max(m, l.capacity_bps);
  return m;
}

NetworkGraph NetworkGraph::with_capacities(const std::vector<double>& caps) const {
  if (caps.size() != links_.size()) {
    throw Error(ErrorCode::kInvalidGraph, "capacity vector size mismatch");
  }
  std::vector<Link> links = links_;
  for (std::size_t i = 0; i < links.size(); ++i) links[i].capacity_bps = caps[i];
  return build_graph(nodes_, std::move(links));
}

NetworkGraph build_graph(std::vector<NodeId> nodes, std::vector<Link> links) {
  NetworkGraph g;
  const std::size_t n = nodes.size();
  if (n == 0) throw Error(ErrorCode::kInvalidGraph, "graph has no nodes");
  g.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) g.index_.emplace_back(nodes[i], i);
  std::sort(g.index_.begin(), g.index_.end());
  for (std::size_t i = 1; i < n; ++i) {
    if (g.index_[i].first == g.index_[i - 1].first) {
      throw Error(ErrorCode::kInvalidGraph,
                  fmt::format("duplicate node id {}", g.index_[i].first));
    }
  }
  g.nodes_ = std::move(nodes);
  g.out_.assign(n, {});
  g.in_.assign(n, {});
  for (LinkIndex l = 0; l < links.size(); ++l) {
    const Link& link = links[l];
    if (!g.has_node(link.src) || !g.has_node(link.dst)) {
      throw Error(ErrorCode::kInvalidGraph,
                  fmt::format("link ({},{}) references an unknown node", link.src, link.dst));
    }
    if (link.src == link.dst) {
      throw Error(ErrorCode::kInvalidGraph, fmt::format("self loop at node {}", link.src));
    }
    if (!(link.capacity_bps > 0) || !std::isfinite(link.capacity_bps)) {
      throw Error(ErrorCode::kNonPositiveCapacity,
                  fmt::format("link ({},{}) has capacity {}", link.src, link.dst,
                              link.capacity_bps));
    }
    if (!(link.latency_s >= 0) || !std::isfinite(link.latency_s)) {
      throw Error(ErrorCode::kInvalidGraph,
                  fmt::format("link ({},{}) has latency {}", link.src, link.dst, link.latency_s));
    }
    std::size_t s = g.node_index(link.src), d = g.node_index(link.dst);
    for (LinkIndex prev : g.out_[s]) {
      if (links[prev].dst == link.dst) {
        throw Error(ErrorCode::kDuplicateLink,
                    fmt::format("duplicate link ({},{})", link.src, link.dst));
      }
    }
    g.out_[s].push_back(l);
    g.in_[d].push_back(l);
    g.link_src_.push_back(s);
    g.link_dst_.push_back(d);
  }
  g.links_ = std::move(links);

  // undirected reachability from the first node
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    auto visit = [&](std::size_t v) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    };
    for (LinkIndex l : g.out_[u]) visit(g.link_dst_[l]);
    for (LinkIndex l : g.in_[u]) visit(g.link_src_[l]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::kDisconnectedGraph,
                  fmt::format("node {} is unreachable", g.nodes_[i]));
    }
  }
  return g;
}

std::vector<Link> bidirectional(const std::vector<Link>& undirected) {
  std::vector<Link> out;
  out.reserve(2 * undirected.size());
  for (const Link& l : undirected) {
    out.push_back(l);
    out.push_back({l.dst, l.src, l.capacity_bps, l.latency_s});
  }
  return out;
}

}  // namespace mpath
