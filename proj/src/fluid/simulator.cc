#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>
#include <random>
#include <tuple>

#include <fmt/format.h>

#include "mpath/error.h"
#include "mpath/fluid.h"

namespace mpath {
namespace {

struct FlatPath {
  std::size_t demand = 0;  // position in the demand set
  std::size_t local = 0;   // position within the demand's paths
  const Path* path = nullptr;
  double one_way_s = 0;
};

struct Snapshot {
  double t_s;
  std::vector<double> aggregate;
};

class Simulation {
 public:
  Simulation(const NetworkGraph& graph, const DemandSet& demands,
             const std::vector<PathSet>& paths, const SimConfig& config);
  SimulationResult run();

 private:
  std::vector<double> aggregates() const;
  const std::vector<double>& observed(double t_s) const;
  void record_sample(double t_s);
  void handle(std::size_t flat, double t_s);

  const NetworkGraph& graph_;
  const DemandSet& demands_;
  const SimConfig& config_;
  std::vector<FlatPath> flat_;
  std::vector<const Path*> path_ptrs_;
  std::vector<std::vector<std::size_t>> members_;  // demand -> flat indices
  std::vector<double> x_;
  std::deque<Snapshot> history_;
  double max_one_way_ = 0;
  double reference_bps_ = 0;
  TrumpLinkState trump_;

  // Epoch counters.
  std::vector<long> epochs_, all_congested_, above_peak_;
  std::vector<double> total_sum_;
  std::vector<double> kappa_, rmax_;

  SimulationResult out_;
};

Simulation::Simulation(const NetworkGraph& graph, const DemandSet& demands,
                       const std::vector<PathSet>& paths, const SimConfig& config)
    : graph_(graph), demands_(demands), config_(config) {
  validate_sim_config(config);
  validate_demands(graph, demands);
  if (paths.size() != demands.size()) {
    throw Error(ErrorCode::kInvalidDemand, "need one path set per demand");
  }
  members_.resize(demands.size());
  for (std::size_t d = 0; d < demands.size(); ++d) {
    if (paths[d].empty()) {
      throw Error(ErrorCode::kNoPathExists, fmt::format("demand {} has no paths", demands[d].id));
    }
    for (std::size_t k = 0; k < paths[d].size(); ++k) {
      const Path& p = paths[d][k];
      validate_path(graph, demands[d], p);
      double owl = 0;
      for (LinkIndex l : p.links) owl += graph.link(l).latency_s;
      if (!(owl > 0)) {
        throw Error(ErrorCode::kInvalidGraph,
                    fmt::format("path {} of demand {} has zero round-trip time", k,
                                demands[d].id));
      }
      members_[d].push_back(flat_.size());
      flat_.push_back({d, k, &p, owl});
      path_ptrs_.push_back(&p);
      max_one_way_ = std::max(max_one_way_, owl);
      out_.series.paths.push_back({demands[d].id, static_cast<int>(k), p.hops()});
    }
  }
  reference_bps_ = graph.max_capacity();
  x_.assign(flat_.size(), 0.0);
  epochs_.assign(demands.size(), 0);
  all_congested_.assign(demands.size(), 0);
  above_peak_.assign(demands.size(), 0);
  total_sum_.assign(demands.size(), 0.0);
  kappa_.assign(flat_.size(), 0.0);
  rmax_.assign(flat_.size(), 0.0);
  trump_.price.assign(graph.num_links(), 0.0);
}

std::vector<double> Simulation::aggregates() const {
  std::vector<double> y(graph_.num_links(), 0.0);
  for (std::size_t i = 0; i < flat_.size(); ++i) {
    for (LinkIndex l : flat_[i].path->links) y[l] += x_[i];
  }
  return y;
}

const std::vector<double>& Simulation::observed(double t_s) const {
  // Latest snapshot taken at or before t_s.
  auto it = std::upper_bound(history_.begin(), history_.end(), t_s,
                             [](double t, const Snapshot& s) { return t < s.t_s; });
  if (it == history_.begin()) return history_.front().aggregate;
  return std::prev(it)->aggregate;
}

void Simulation::record_sample(double t_s) {
  out_.series.times.push_back(t_s);
  out_.series.rates.push_back(x_);
}

void Simulation::handle(std::size_t flat, double t_s) {
  const FlatPath& fp = flat_[flat];
  const std::size_t d = fp.demand;
  const std::vector<std::size_t>& mine = members_[d];
  const double peak = demands_[d].peak_at(t_s);
  std::vector<double> local(mine.size());
  for (std::size_t j = 0; j < mine.size(); ++j) local[j] = x_[mine[j]];

  if (!(peak > 0)) {
    std::fill(local.begin(), local.end(), 0.0);
  } else if (config_.controller == ControllerKind::kTrump) {
    trump_integrate(trump_, graph_, history_.back().aggregate, t_s, config_.trump);
    std::vector<const Path*> ptrs;
    for (std::size_t i : mine) ptrs.push_back(flat_[i].path);
    double total = 0;
    for (double v : local) total += v;
    ++epochs_[d];
    total_sum_[d] += total;
    above_peak_[d] += total > peak;
    trump_update(local, fp.local, ptrs, graph_, trump_, peak, reference_bps_, config_.trump);
  } else {
    std::vector<double> costs(mine.size());
    for (std::size_t j = 0; j < mine.size(); ++j) {
      const FlatPath& other = flat_[mine[j]];
      double seen = config_.feedback_delay ? t_s - other.one_way_s : t_s;
      costs[j] = mirto_path_cost(graph_, *other.path, observed(seen), config_.delta_plus_bps);
    }
    double total = 0;
    for (double v : local) total += v;
    ++epochs_[d];
    total_sum_[d] += total;
    above_peak_[d] += total > peak;
    double lo = *std::min_element(costs.begin(), costs.end());
    if (std::isinf(lo)) {
      ++all_congested_[d];
    } else {
      std::vector<std::size_t> low;
      for (std::size_t j = 0; j < costs.size(); ++j) {
        if (costs[j] <= lo * (1 + 1e-12)) low.push_back(j);
      }
      for (std::size_t j : low) kappa_[mine[j]] += 1.0 / static_cast<double>(low.size());
    }
    double hi = -1;
    for (std::size_t j = 0; j < costs.size(); ++j) {
      if (local[j] > 0) hi = std::max(hi, costs[j]);
    }
    if (hi >= 0) {
      std::vector<std::size_t> high;
      for (std::size_t j = 0; j < costs.size(); ++j) {
        if (local[j] > 0 && (costs[j] == hi || costs[j] >= hi * (1 - 1e-12))) high.push_back(j);
      }
      for (std::size_t j : high) rmax_[mine[j]] += 1.0 / static_cast<double>(high.size());
    }
    mirto_rtt_update(local, fp.local, costs, peak, config_);
  }
  for (std::size_t j = 0; j < mine.size(); ++j) x_[mine[j]] = local[j];
  if (config_.architecture == Architecture::kFA) fa_clamp(graph_, path_ptrs_, x_);
}

SimulationResult Simulation::run() {
  using Event = std::tuple<double, int, int, std::size_t>;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::seed_seq seq{config_.seed, std::uint64_t{0xf1d0}};
  std::mt19937_64 rng(seq);
  for (std::size_t i = 0; i < flat_.size(); ++i) {
    double rtt = 2 * flat_[i].one_way_s;
    std::uniform_real_distribution<double> phase(0.0, rtt);
    queue.emplace(phase(rng), demands_[flat_[i].demand].id, static_cast<int>(flat_[i].local), i);
  }
  history_.push_back({0.0, aggregates()});

  const long samples = static_cast<long>(std::floor(config_.horizon_s / config_.sample_s + 1e-9));
  long next = 0;
  while (!queue.empty()) {
    auto [t, id, k, flat] = queue.top();
    if (t > config_.horizon_s) break;
    queue.pop();
    while (next <= samples && static_cast<double>(next) * config_.sample_s <= t) {
      record_sample(static_cast<double>(next) * config_.sample_s);
      ++next;
    }
    handle(flat, t);
    history_.push_back({t, aggregates()});
    while (history_.size() >= 2 && history_[1].t_s <= t - max_one_way_) history_.pop_front();
    queue.emplace(t + 2 * flat_[flat].one_way_s, id, k, flat);
  }
  while (next <= samples) {
    record_sample(static_cast<double>(next) * config_.sample_s);
    ++next;
  }

  FluidValidation& v = out_.validation;
  for (std::size_t d = 0; d < demands_.size(); ++d) {
    double e = static_cast<double>(epochs_[d]);
    double open = e - static_cast<double>(all_congested_[d]);
    for (std::size_t i : members_[d]) {
      PathValidation pv;
      pv.demand_id = demands_[d].id;
      pv.path_index = static_cast<int>(flat_[i].local);
      pv.kappa = open > 0 ? kappa_[i] / open : 0.0;
      pv.q = e > 0 ? all_congested_[d] / e : 0.0;
      pv.r = e > 0 ? rmax_[i] / e : 0.0;
      pv.s = e > 0 ? above_peak_[d] / e : 0.0;
      v.paths.push_back(pv);
    }
    v.epoch_mean_total.push_back(e > 0 ? total_sum_[d] / e : 0.0);
    v.epochs.push_back(epochs_[d]);
  }
  return std::move(out_);
}

}  // namespace

SimulationResult run_fluid_simulation(const NetworkGraph& graph, const DemandSet& demands,
                                      const std::vector<PathSet>& paths,
                                      const SimConfig& config) {
  Simulation sim(graph, demands, paths, config);
  return sim.run();
}

}  // namespace mpath
