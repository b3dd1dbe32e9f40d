#include "mpath/allocation.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "mpath/error.h"

namespace mpath {

double PathRates::total() const {
  double s = 0;
  for (double r : rates) s += r;
  return s;
}

LinkAllocation::LinkAllocation(const DemandSet& demands, std::size_t num_links) {
  for (const Demand& d : demands) {
    demand_ids.push_back(d.id);
    rates.emplace_back(num_links, 0.0);
    totals.push_back(0.0);
  }
}

std::vector<double> LinkAllocation::aggregate() const {
  std::vector<double> agg(rates.empty() ? 0 : rates.front().size(), 0.0);
  for (const auto& r : rates) {
    for (std::size_t l = 0; l < r.size(); ++l) agg[l] += r[l];
  }
  return agg;
}

int LinkAllocation::position(int demand_id) const {
  for (std::size_t i = 0; i < demand_ids.size(); ++i) {
    if (demand_ids[i] == demand_id) return static_cast<int>(i);
  }
  return -1;
}

LinkAllocation expand_to_links(const PathAllocation& paths, const NetworkGraph& graph) {
  LinkAllocation out;
  for (const PathRates& pr : paths) {
    std::vector<double> r(graph.num_links(), 0.0);
    for (std::size_t k = 0; k < pr.paths.size(); ++k) {
      for (LinkIndex l : pr.paths[k].links) r[l] += pr.rates[k];
    }
    out.demand_ids.push_back(pr.demand_id);
    out.rates.push_back(std::move(r));
    out.totals.push_back(pr.total());
  }
  return out;
}

std::vector<double> path_link_aggregates(const PathAllocation& paths, const NetworkGraph& graph) {
  std::vector<double> agg(graph.num_links(), 0.0);
  for (const PathRates& pr : paths) {
    for (std::size_t k = 0; k < pr.paths.size(); ++k) {
      for (LinkIndex l : pr.paths[k].links) agg[l] += pr.rates[k];
    }
  }
  return agg;
}

std::vector<double> link_loads(const LinkAllocation& alloc, const NetworkGraph& graph) {
  std::vector<double> rho(graph.num_links(), 0.0);
  if (alloc.num_demands() == 0) return rho;
  std::vector<double> agg = alloc.aggregate();
  for (LinkIndex l = 0; l < graph.num_links(); ++l) rho[l] = agg[l] / graph.link(l).capacity_bps;
  return rho;
}

std::vector<double> conservation_residuals(const LinkAllocation& alloc,
                                           const NetworkGraph& graph,
                                           const DemandSet& demands) {
  std::vector<double> out;
  for (std::size_t i = 0; i < alloc.num_demands(); ++i) {
    auto it = std::find_if(demands.begin(), demands.end(),
                           [&](const Demand& d) { return d.id == alloc.demand_ids[i]; });
    if (it == demands.end()) throw Error(ErrorCode::kInvalidDemand, "allocation for unknown demand");
    std::vector<double> net(graph.num_nodes(), 0.0);
    for (LinkIndex l = 0; l < graph.num_links(); ++l) {
      net[graph.src_index(l)] += alloc.rates[i][l];
      net[graph.dst_index(l)] -= alloc.rates[i][l];
    }
    net[graph.node_index(it->source)] -= alloc.totals[i];
    net[graph.node_index(it->destination)] += alloc.totals[i];
    double worst = 0;
    for (double v : net) worst = std::max(worst, std::fabs(v));
    out.push_back(worst);
  }
  return out;
}

std::vector<FlowPath> extract_paths(const NetworkGraph& graph, std::vector<double>& flow,
                                    NodeId source, NodeId sink, double limit, double tolerance) {
  std::vector<FlowPath> out;
  const std::size_t s = graph.node_index(source), t = graph.node_index(sink);
  double remaining = limit;
  while (remaining > tolerance) {
    std::vector<long> via(graph.num_nodes(), -1);
    std::vector<char> seen(graph.num_nodes(), 0);
    std::deque<std::size_t> queue{s};
    seen[s] = 1;
    while (!queue.empty() && !seen[t]) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (LinkIndex l : graph.out_links(u)) {
        std::size_t v = graph.dst_index(l);
        if (seen[v] || flow[l] <= tolerance) continue;
        seen[v] = 1;
        via[v] = static_cast<long>(l);
        queue.push_back(v);
      }
    }
    if (!seen[t]) break;
    FlowPath p;
    double rate = remaining;
    for (std::size_t v = t; v != s; v = graph.src_index(static_cast<LinkIndex>(via[v]))) {
      LinkIndex l = static_cast<LinkIndex>(via[v]);
      p.links.push_back(l);
      rate = std::min(rate, flow[l]);
    }
    std::reverse(p.links.begin(), p.links.end());
    for (LinkIndex l : p.links) flow[l] -= rate;
    p.rate = rate;
    remaining -= rate;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<FlowPath> decompose_flow(const NetworkGraph& graph, const std::vector<double>& flow,
                                     NodeId source, NodeId sink, double tolerance) {
  std::vector<double> work = flow;
  return extract_paths(graph, work, source, sink, std::numeric_limits<double>::infinity(),
                       tolerance);
}

}  // namespace mpath
