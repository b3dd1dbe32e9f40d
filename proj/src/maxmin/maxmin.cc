#include "mpath/maxmin.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "mpath/error.h"
#include "mpath/lp.h"
#include "mpath/maxflow.h"

namespace mpath {
namespace {

double initial_peak(const Demand& d) {
  double p = d.peak_at(0.0);
  if (!(p > 0)) {
    throw Error(ErrorCode::kInvalidDemand,
                fmt::format("demand {} is inactive at t=0; pass demands_at(t)", d.id));
  }
  return p;
}

// Aggregated node-link LP: one commodity per destination, all in units of
// `scale`. Supplies at the sources are the demand totals.
class FlowLp {
 public:
  FlowLp(const NetworkGraph& graph, const DemandSet& demands)
      : graph_(graph), demands_(demands), scale_(graph.max_capacity()) {
    for (const Demand& d : demands) {
      if (std::find(dests_.begin(), dests_.end(), d.destination) == dests_.end()) {
        dests_.push_back(d.destination);
      }
    }
    std::sort(dests_.begin(), dests_.end());
  }

  double scale() const { return scale_; }
  const std::vector<NodeId>& destinations() const { return dests_; }

  // Builds flow variables, conservation rows (without the rhs/extra terms)
  // and capacity rows. Returns the LP with `var_[e][l]` filled in.
  LinearProgram base() {
    LinearProgram lp;
    const std::size_t L = graph_.num_links();
    var_.assign(dests_.size(), std::vector<int>(L, -1));
    row_.assign(dests_.size(), std::vector<int>(graph_.num_nodes(), -1));
    for (std::size_t e = 0; e < dests_.size(); ++e) {
      for (LinkIndex l = 0; l < L; ++l) {
        if (graph_.link(l).src == dests_[e]) continue;  // flow never leaves its sink
        var_[e][l] = lp.add_var();
      }
      std::size_t sink = graph_.node_index(dests_[e]);
      for (std::size_t v = 0; v < graph_.num_nodes(); ++v) {
        if (v == sink) continue;
        LinearConstraint c;
        for (LinkIndex l : graph_.out_links(v)) {
          if (var_[e][l] >= 0) c.terms.push_back({var_[e][l], 1.0});
        }
        for (LinkIndex l : graph_.in_links(v)) {
          if (var_[e][l] >= 0) c.terms.push_back({var_[e][l], -1.0});
        }
        row_[e][v] = static_cast<int>(lp.equalities.size());
        lp.equalities.push_back(std::move(c));
      }
    }
    for (LinkIndex l = 0; l < L; ++l) {
      LinearConstraint c;
      for (std::size_t e = 0; e < dests_.size(); ++e) {
        if (var_[e][l] >= 0) c.terms.push_back({var_[e][l], 1.0});
      }
      c.rhs = graph_.link(l).capacity_bps / scale_;
      lp.inequalities.push_back(std::move(c));
    }
    return lp;
  }

  LinearConstraint& source_row(LinearProgram& lp, const Demand& d) {
    std::size_t e = dest_pos(d.destination);
    return lp.equalities[row_[e][graph_.node_index(d.source)]];
  }

  void set_supplies(LinearProgram& lp, const std::vector<double>& levels) {
    for (std::size_t i = 0; i < demands_.size(); ++i) {
      source_row(lp, demands_[i]).rhs += levels[i] / scale_;
    }
  }

  void add_linear_cost(LinearProgram& lp) {
    for (std::size_t e = 0; e < dests_.size(); ++e) {
      for (LinkIndex l = 0; l < graph_.num_links(); ++l) {
        if (var_[e][l] >= 0) lp.objective[var_[e][l]] = -scale_ / graph_.link(l).capacity_bps;
      }
    }
  }

  // Per-destination link flows in bit/s.
  std::vector<std::vector<double>> flows(const LPSolution& sol) const {
    std::vector<std::vector<double>> out(dests_.size(),
                                         std::vector<double>(graph_.num_links(), 0.0));
    for (std::size_t e = 0; e < dests_.size(); ++e) {
      for (LinkIndex l = 0; l < graph_.num_links(); ++l) {
        if (var_[e][l] >= 0) out[e][l] = std::max(0.0, sol.values[var_[e][l]]) * scale_;
      }
    }
    return out;
  }

  std::size_t dest_pos(NodeId d) const {
    return static_cast<std::size_t>(std::lower_bound(dests_.begin(), dests_.end(), d) -
                                    dests_.begin());
  }

 private:
  const NetworkGraph& graph_;
  const DemandSet& demands_;
  double scale_;
  std::vector<NodeId> dests_;
  std::vector<std::vector<int>> var_;
  std::vector<std::vector<int>> row_;
};

// Per-demand link flows from per-destination aggregates: decompose each
// source's share into paths, split among that source's demands by total.
LinkAllocation split_by_demand(const NetworkGraph& graph, const DemandSet& demands,
                               const std::vector<double>& levels, const FlowLp& lp,
                               std::vector<std::vector<double>> flows) {
  LinkAllocation out(demands, graph.num_links());
  const double tol = 1e-12 * lp.scale();
  std::map<std::pair<NodeId, NodeId>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    groups[{demands[i].source, demands[i].destination}].push_back(i);
    out.totals[i] = levels[i];
  }
  for (const auto& [pair, members] : groups) {
    double supply = 0;
    for (std::size_t i : members) supply += levels[i];
    if (supply <= 0) continue;
    auto& f = flows[lp.dest_pos(pair.second)];
    for (const FlowPath& p : extract_paths(graph, f, pair.first, pair.second, supply, tol)) {
      for (std::size_t i : members) {
        double share = p.rate * levels[i] / supply;
        for (LinkIndex l : p.links) out.rates[i][l] += share;
      }
    }
  }
  return out;
}

double peak_room(const Demand& d, double level) {
  double p = initial_peak(d);
  return is_elastic(p) ? kLpInfinity : std::max(0.0, p - level);
}

}  // namespace

double MaxMinResult::total(int demand_id) const {
  int pos = allocation.position(demand_id);
  if (pos < 0) throw Error(ErrorCode::kInvalidDemand, fmt::format("no demand {}", demand_id));
  return allocation.totals[pos];
}

FillResult maxmin_fill_iteration(const NetworkGraph& graph, const DemandSet& demands,
                                 const std::vector<double>& levels,
                                 const std::vector<char>& active) {
  if (std::none_of(active.begin(), active.end(), [](char a) { return a != 0; })) {
    throw Error(ErrorCode::kInvalidDemand, "fill iteration needs an active demand");
  }
  FlowLp flp(graph, demands);
  const double S = flp.scale();
  LinearProgram lp = flp.base();
  flp.set_supplies(lp, levels);
  double zcap = kLpInfinity;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (active[i]) zcap = std::min(zcap, peak_room(demands[i], levels[i]) / S);
  }
  // Slightly negative z is allowed so rounding in earlier rounds cannot make
  // the LP infeasible; the caller treats z <= tolerance as "no progress".
  int z = lp.add_var(-1e-7, zcap, 1.0);
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (active[i]) flp.source_row(lp, demands[i]).terms.push_back({z, -1.0});
  }
  LPSolution first = solve_linear_program(lp);
  require_optimal(first);
  double zstar = first.values[z];

  // Lexicographic second stage: hold z, minimize linear cost.
  // z is pinned; the cost pass would otherwise slide it down to any slack.
  lp.objective[z] = 0.0;
  lp.upper[z] = std::min(zcap, zstar);
  lp.lower[z] = lp.upper[z];
  flp.add_linear_cost(lp);
  LPSolution second = solve_linear_program(lp);
  if (second.status != LPStatus::kOptimal) {
    lp.lower[z] = zstar - 1e-11 * std::max(1.0, std::fabs(zstar));
    second = solve_linear_program(lp);
  }
  const LPSolution& sol = second.status == LPStatus::kOptimal ? second : first;

  FillResult out;
  out.z_bps = sol.values[z] * S;
  std::vector<double> next = levels;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (active[i]) next[i] += out.z_bps;
  }
  out.routing = split_by_demand(graph, demands, next, flp, flp.flows(sol));
  return out;
}

ResidualGraph reduce_to_residual(const NetworkGraph& graph, const LinkAllocation& routed) {
  ResidualGraph r;
  std::vector<double> agg =
      routed.num_demands() ? routed.aggregate() : std::vector<double>(graph.num_links(), 0.0);
  const double S = graph.max_capacity();
  for (LinkIndex l = 0; l < graph.num_links(); ++l) {
    double c = graph.link(l).capacity_bps;
    double left = c - agg[l];
    if (left < -kFreezeTolerance * S) {
      throw Error(ErrorCode::kNegativeResidual,
                  fmt::format("link ({},{}) over-allocated by {}", graph.link(l).src,
                              graph.link(l).dst, -left));
    }
    bool gone = left <= kFreezeTolerance * c;
    r.capacity.push_back(gone ? 0.0 : left);
    r.removed.push_back(gone ? 1 : 0);
  }
  return r;
}

bool is_demand_frozen(const NetworkGraph& graph, const ResidualGraph& residual,
                      const Demand& demand, double current_rate) {
  const double S = graph.max_capacity();
  double p = initial_peak(demand);
  if (!is_elastic(p) && current_rate >= p - kFreezeTolerance * S) return true;
  return max_flow(graph, residual.capacity, demand.source, demand.destination) <=
         kFreezeTolerance * S;
}

bool can_grow_with_rerouting(const NetworkGraph& graph, const DemandSet& demands,
                             const std::vector<double>& levels, std::size_t which) {
  FlowLp flp(graph, demands);
  const double S = flp.scale();
  LinearProgram lp = flp.base();
  flp.set_supplies(lp, levels);
  double room = peak_room(demands[which], levels[which]) / S;
  int delta = lp.add_var(-kLpInfinity, room, 1.0);
  flp.source_row(lp, demands[which]).terms.push_back({delta, -1.0});
  LPSolution sol = solve_linear_program(lp);
  if (sol.status != LPStatus::kOptimal) return false;
  return sol.values[delta] > kFreezeTolerance;
}

MaxMinResult maxmin_multipath_allocate(const NetworkGraph& graph, const DemandSet& demands) {
  validate_demands(graph, demands);
  for (const Demand& d : demands) {
    initial_peak(d);
    if (max_flow(graph, d.source, d.destination) <= 0) {
      throw Error(ErrorCode::kNoPathExists, fmt::format("demand {} is not routable", d.id));
    }
  }
  MaxMinResult result;
  const std::size_t n = demands.size();
  std::vector<double> levels(n, 0.0);
  std::vector<char> active(n, 1);
  double level = 0;
  result.allocation = LinkAllocation(demands, graph.num_links());
  const double S = graph.max_capacity();

  while (std::any_of(active.begin(), active.end(), [](char a) { return a != 0; })) {
    FillResult fill = maxmin_fill_iteration(graph, demands, levels, active);
    double z = std::max(0.0, fill.z_bps);
    if (z <= kFreezeTolerance * S) z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) levels[i] += z;
    }
    level += z;
    for (std::size_t i = 0; i < n; ++i) fill.routing.totals[i] = levels[i];

    ResidualGraph residual = reduce_to_residual(graph, fill.routing);
    MaxMinIteration it;
    it.z_bps = z;
    it.level_bps = level;
    it.residual_capacity = residual.capacity;
    // Probe results depend only on (source, destination) within a round.
    std::map<std::pair<NodeId, NodeId>, bool> blocked;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const Demand& d = demands[i];
      bool frozen = false;
      double p = initial_peak(d);
      if (!is_elastic(p) && levels[i] >= p - kFreezeTolerance * S) {
        frozen = true;
        levels[i] = std::min(levels[i], p);
      } else if (is_demand_frozen(graph, residual, d, levels[i])) {
        auto key = std::make_pair(d.source, d.destination);
        auto found = blocked.find(key);
        if (found == blocked.end()) {
          found = blocked.emplace(key, !can_grow_with_rerouting(graph, demands, levels, i)).first;
        }
        frozen = found->second;
      }
      if (frozen) {
        active[i] = 0;
        it.frozen_ids.push_back(d.id);
      }
    }
    if (it.frozen_ids.empty() && z == 0.0) {
      throw Error(ErrorCode::kNumericalFailure, "max-min fill made no progress");
    }
    result.allocation = std::move(fill.routing);
    for (std::size_t i = 0; i < n; ++i) result.allocation.totals[i] = levels[i];
    result.trace.iterations.push_back(std::move(it));
  }
  return result;
}

std::vector<double> satisfaction_profile(const NetworkGraph& graph, const DemandSet& demands,
                                         const std::vector<double>& totals) {
  std::vector<double> out;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    double p = demands[i].peak_at(0.0);
    if (is_elastic(p)) p = max_flow(graph, demands[i].source, demands[i].destination);
    double s = p > 0 ? totals[i] / p : 1.0;
    out.push_back(std::clamp(s, 0.0, 1.0));
  }
  return out;
}

}  // namespace mpath
