#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace mpath {

using NodeId = int;
using LinkIndex = std::size_t;

struct Link {
  NodeId src = 0;
  NodeId dst = 0;
  double capacity_bps = 0;
  double latency_s = 0;

  bool operator==(const Link&) const = default;
};

// Directed capacitated graph. Bidirectional topologies carry two links.
// Immutable once built; nodes are addressed either by id or by dense index.
class NetworkGraph {
 public:
  NetworkGraph() = default;

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkIndex l) const { return links_[l]; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_links() const { return links_.size(); }

  bool has_node(NodeId id) const;
  // Dense index of a node id; throws InvalidGraph for unknown ids.
  std::size_t node_index(NodeId id) const;
  std::optional<LinkIndex> find_link(NodeId src, NodeId dst) const;
  // a_ij of the adjacency matrix.
  bool adjacent(NodeId src, NodeId dst) const { return find_link(src, dst).has_value(); }

  const std::vector<LinkIndex>& out_links(std::size_t node) const { return out_[node]; }
  const std::vector<LinkIndex>& in_links(std::size_t node) const { return in_[node]; }
  std::size_t src_index(LinkIndex l) const { return link_src_[l]; }
  std::size_t dst_index(LinkIndex l) const { return link_dst_[l]; }

  std::vector<double> capacities() const;
  double min_capacity() const;
  double max_capacity() const;

  // Same topology with new capacities (all must stay > 0).
  NetworkGraph with_capacities(const std::vector<double>& caps) const;

  bool operator==(const NetworkGraph& other) const {
    return nodes_ == other.nodes_ && links_ == other.links_;
  }

 private:
  friend NetworkGraph build_graph(std::vector<NodeId> nodes, std::vector<Link> links);

  std::vector<NodeId> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<LinkIndex>> out_;
  std::vector<std::vector<LinkIndex>> in_;
  std::vector<std::size_t> link_src_;
  std::vector<std::size_t> link_dst_;
  std::vector<std::pair<NodeId, std::size_t>> index_;  // sorted by id
};

// Validates and indexes. Errors: DisconnectedGraph, DuplicateLink,
// NonPositiveCapacity, InvalidGraph (bad ids, negative latency).
// Connectivity is checked on the underlying undirected graph.
NetworkGraph build_graph(std::vector<NodeId> nodes, std::vector<Link> links);

// Convenience: every {a, b} becomes the two directed links a->b and b->a.
std::vector<Link> bidirectional(const std::vector<Link>& undirected);

}  // namespace mpath
