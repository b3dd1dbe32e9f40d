#pragma once

#include <cstdint>
#include <vector>

#include "mpath/allocation.h"
#include "mpath/demand.h"
#include "mpath/graph.h"
#include "mpath/paths.h"

namespace mpath {

// FD: MIRTO on binary congestion feedback. QD: TRUMP with link prices.
// FA: MIRTO plus per-link fair clamping.
enum class Architecture { kFD, kQD, kFA };
enum class ControllerKind { kMirto, kTrump };

// Branch (c) of MIRTO. kBalanced takes delta_plus / (tied max paths) off
// each tied path; kLiteral takes x_k * delta_minus.
enum class DecrementRule { kBalanced, kLiteral };

struct TrumpParams {
  double w = 1e-2;
  double beta = 1e-3;
  double gamma = 1e-3;
  // Integration constant of the congestion price.
  double tau_s = 1e-3;
};

struct SimConfig {
  double delta_plus_bps = 0.5e6;
  double delta_minus = 0.013;
  double horizon_s = 80;
  double sample_s = 0.1;
  Architecture architecture = Architecture::kFD;
  ControllerKind controller = ControllerKind::kMirto;
  DecrementRule decrement = DecrementRule::kBalanced;
  // Congestion is observed as of one one-way path latency ago.
  bool feedback_delay = true;
  TrumpParams trump;
  std::uint64_t seed = 1;
};

// Throws InvalidConfig.
void validate_sim_config(const SimConfig& config);

// sum of delta_plus / C over the path, or +inf when any link carries at
// least its capacity.
double mirto_path_cost(const NetworkGraph& graph, const Path& path,
                       const std::vector<double>& link_aggregate, double delta_plus_bps);

enum class MirtoBranch { kNone, kAllCongested, kIncrease, kDecrease };

// Algorithm 1 for path k of one demand. `costs` holds Q for every path of the
// demand; `rates` is updated in place (only rates[k] changes).
MirtoBranch mirto_rtt_update(std::vector<double>& rates, std::size_t k,
                             const std::vector<double>& costs, double peak_bps,
                             const SimConfig& config);

// Max-min share of `capacity` among claimants bounded by their offers.
std::vector<double> fa_fair_caps(double capacity, const std::vector<double>& offers);

// Clamp every path rate to the smallest fair cap along it. `rates` is flat
// over `paths`.
void fa_clamp(const NetworkGraph& graph, const std::vector<const Path*>& paths,
              std::vector<double>& rates);

struct TrumpLinkState {
  std::vector<double> price;  // congestion part, per link
  double last_update_s = 0;
};

// Integrates the congestion price up to `now_s` given the aggregates held
// since the last call.
void trump_integrate(TrumpLinkState& state, const NetworkGraph& graph,
                     const std::vector<double>& link_aggregate, double now_s,
                     const TrumpParams& params);

// One TRUMP step for path k of a demand. Rates are scaled by the largest
// link capacity (reference_bps) before the utility gradient 1/x is taken.
void trump_update(std::vector<double>& rates, std::size_t k,
                  const std::vector<const Path*>& paths, const NetworkGraph& graph,
                  const TrumpLinkState& state, double peak_bps, double reference_bps,
                  const TrumpParams& params);

struct SeriesPath {
  int demand_id = 0;
  int path_index = 0;
  std::size_t hops = 0;
};

struct RateTimeSeries {
  std::vector<SeriesPath> paths;
  std::vector<double> times;
  std::vector<std::vector<double>> rates;  // [sample][path]

  std::vector<int> demand_ids() const;
  // Per-sample total of one demand.
  std::vector<double> demand_total(int demand_id) const;
  // Per-sample sum of rate * hops.
  std::vector<double> consumed_bandwidth() const;
};

struct PathValidation {
  int demand_id = 0;
  int path_index = 0;
  double kappa = 0;  // min-cost share of the not-all-congested epochs
  double q = 0;      // all paths congested
  double r = 0;      // max-cost share (among loaded paths)
  double s = 0;      // x^d > p^d
};

struct FluidValidation {
  std::vector<PathValidation> paths;
  // Epoch-averaged demand total, one per demand in input order.
  std::vector<double> epoch_mean_total;
  std::vector<long> epochs;
};

struct SimulationResult {
  RateTimeSeries series;
  FluidValidation validation;
};

// Paths are taken per demand in input order; every path needs rtt > 0.
SimulationResult run_fluid_simulation(const NetworkGraph& graph, const DemandSet& demands,
                                      const std::vector<PathSet>& paths,
                                      const SimConfig& config);

struct SplitReport {
  std::vector<int> demand_ids;
  std::vector<double> mean_total;
  std::vector<double> reference_total;
  std::vector<double> deviation;  // relative to the reference total
  std::vector<std::vector<double>> mean_path;
  std::vector<std::vector<double>> path_deviation;  // relative to the total
  std::vector<std::vector<char>> probing;           // zero in reference, used in series
  double max_deviation = 0;
};

// Trailing `window_fraction` of [t_start, t_end) against a reference split.
// Throws WindowTooShort if the window holds no sample or the series ends
// before t_end.
SplitReport steady_state_split_check(const RateTimeSeries& series,
                                     const PathAllocation& reference, double t_start_s,
                                     double t_end_s, double window_fraction);

// Decomposes each demand's link flow onto the given path sets. Flow on paths
// outside the set is dropped.
PathAllocation link_flow_to_paths(const NetworkGraph& graph, const LinkAllocation& flow,
                                  const DemandSet& demands, const std::vector<PathSet>& paths);

// Constant-peak intervals of the schedule: 0, every breakpoint before the
// horizon, and the horizon.
std::vector<double> schedule_epochs(const DemandSet& demands, double horizon_s);

struct EpochOptimum {
  double t_start_s = 0;
  double t_end_s = 0;
  PathAllocation allocation;  // every demand, zero while inactive
};

// Max-min multipath optimum of each epoch, split onto the given paths.
std::vector<EpochOptimum> epoch_optima(const NetworkGraph& graph, const DemandSet& demands,
                                       const std::vector<PathSet>& paths, double horizon_s);

}  // namespace mpath
