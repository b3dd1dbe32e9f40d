#include "mpath/maxflow.h"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>

namespace mpath {
namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using FlowGraph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS, boost::no_property,
    boost::property<boost::edge_capacity_t, double,
                    boost::property<boost::edge_residual_capacity_t, double,
                                    boost::property<boost::edge_reverse_t,
                                                    Traits::edge_descriptor>>>>;

}  // namespace

double max_flow(const NetworkGraph& graph, const std::vector<double>& capacities, NodeId source,
                NodeId sink) {
  FlowGraph g(graph.num_nodes());
  auto cap = boost::get(boost::edge_capacity, g);
  auto rev = boost::get(boost::edge_reverse, g);
  for (LinkIndex l = 0; l < graph.num_links(); ++l) {
    if (!(capacities[l] > 0)) continue;
    auto e = boost::add_edge(graph.src_index(l), graph.dst_index(l), g).first;
    auto r = boost::add_edge(graph.dst_index(l), graph.src_index(l), g).first;
    cap[e] = capacities[l];
    cap[r] = 0;
    rev[e] = r;
    rev[r] = e;
  }
  // Edmonds-Karp rather than push-relabel: the latter asserts exact flow
  // balance, which double capacities do not always give.
  return boost::edmonds_karp_max_flow(g, graph.node_index(source), graph.node_index(sink));
}

}  // namespace mpath
