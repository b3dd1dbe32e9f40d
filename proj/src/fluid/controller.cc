#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "mpath/error.h"
#include "mpath/fluid.h"

namespace mpath {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Path costs are sums of the same few terms in different orders.
bool same_cost(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

// Normalized rates below this are treated as this when taking 1/x.
constexpr double kTrumpFloor = 1e-2;

}  // namespace

void validate_sim_config(const SimConfig& c) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (!(c.delta_plus_bps > 0) || !std::isfinite(c.delta_plus_bps)) bad("delta_plus_bps must be > 0");
  if (!(c.delta_minus > 0 && c.delta_minus < 1)) bad("delta_minus must be in (0, 1)");
  if (!(c.horizon_s > 0) || !std::isfinite(c.horizon_s)) bad("horizon_s must be > 0");
  if (!(c.sample_s > 0) || !std::isfinite(c.sample_s)) bad("sample_s must be > 0");
  bool trump = c.controller == ControllerKind::kTrump;
  if (trump != (c.architecture == Architecture::kQD)) {
    bad("TRUMP runs in QD mode and MIRTO in FD or FA mode");
  }
  const TrumpParams& t = c.trump;
  if (!(t.w > 0) || !(t.beta > 0) || !(t.gamma > 0) || !(t.tau_s > 0)) {
    bad("trump parameters must be positive");
  }
}

double mirto_path_cost(const NetworkGraph& graph, const Path& path,
                       const std::vector<double>& link_aggregate, double delta_plus_bps) {
  double q = 0;
  for (LinkIndex l : path.links) {
    double c = graph.link(l).capacity_bps;
    // Relative slack so a link filled exactly by the FA clamp still reads
    // as congested.
    if (link_aggregate[l] >= c * (1 - 1e-9)) return kInf;
    q += delta_plus_bps / c;
  }
  return q;
}

MirtoBranch mirto_rtt_update(std::vector<double>& rates, std::size_t k,
                             const std::vector<double>& costs, double peak_bps,
                             const SimConfig& config) {
  const std::size_t n = rates.size();
  double total = std::accumulate(rates.begin(), rates.end(), 0.0);
  bool all_congested = std::all_of(costs.begin(), costs.end(),
                                   [](double q) { return std::isinf(q); });
  if (all_congested) {
    rates[k] = std::max(0.0, rates[k] - total * config.delta_minus);
    return MirtoBranch::kAllCongested;
  }
  if (peak_bps >= total) {
    double lo = *std::min_element(costs.begin(), costs.end());
    std::size_t tied = 0;
    for (double q : costs) tied += same_cost(q, lo);
    if (!same_cost(costs[k], lo)) return MirtoBranch::kNone;
    rates[k] += config.delta_plus_bps / static_cast<double>(tied);
    return MirtoBranch::kIncrease;
  }
  double hi = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (rates[i] > 0) hi = std::max(hi, costs[i]);
  }
  if (!(rates[k] > 0) || !same_cost(costs[k], hi)) return MirtoBranch::kNone;
  std::size_t tied = 0;
  for (std::size_t i = 0; i < n; ++i) tied += rates[i] > 0 && same_cost(costs[i], hi);
  double step = config.decrement == DecrementRule::kBalanced
                    ? config.delta_plus_bps / static_cast<double>(tied)
                    : rates[k] * config.delta_minus;
  rates[k] = std::max(0.0, rates[k] - step);
  return MirtoBranch::kDecrease;
}

std::vector<double> fa_fair_caps(double capacity, const std::vector<double>& offers) {
  std::vector<std::size_t> order(offers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return offers[a] < offers[b]; });
  std::vector<double> caps(offers.size());
  double left = capacity;
  for (std::size_t j = 0; j < order.size(); ++j) {
    double share = left / static_cast<double>(order.size() - j);
    double c = std::max(0.0, std::min(offers[order[j]], share));
    caps[order[j]] = c;
    left -= c;
  }
  return caps;
}

void fa_clamp(const NetworkGraph& graph, const std::vector<const Path*>& paths,
              std::vector<double>& rates) {
  std::vector<std::vector<std::size_t>> users(graph.num_links());
  std::vector<double> load(graph.num_links(), 0.0);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (!(rates[i] > 0)) continue;
    for (LinkIndex l : paths[i]->links) {
      users[l].push_back(i);
      load[l] += rates[i];
    }
  }
  std::vector<double> cap(rates.size(), kInf);
  for (LinkIndex l = 0; l < graph.num_links(); ++l) {
    double c = graph.link(l).capacity_bps;
    if (load[l] <= c) continue;
    std::vector<double> offers;
    for (std::size_t i : users[l]) offers.push_back(rates[i]);
    std::vector<double> fair = fa_fair_caps(c, offers);
    for (std::size_t j = 0; j < users[l].size(); ++j) {
      cap[users[l][j]] = std::min(cap[users[l][j]], fair[j]);
    }
  }
  for (std::size_t i = 0; i < rates.size(); ++i) rates[i] = std::min(rates[i], cap[i]);
}

void trump_integrate(TrumpLinkState& state, const NetworkGraph& graph,
                     const std::vector<double>& link_aggregate, double now_s,
                     const TrumpParams& params) {
  if (state.price.size() != graph.num_links()) state.price.assign(graph.num_links(), 0.0);
  double dt = now_s - state.last_update_s;
  if (dt > 0) {
    for (LinkIndex l = 0; l < graph.num_links(); ++l) {
      double c = graph.link(l).capacity_bps;
      state.price[l] = std::max(
          0.0, state.price[l] + params.beta * (link_aggregate[l] - c) / c * dt / params.tau_s);
    }
  }
  state.last_update_s = std::max(state.last_update_s, now_s);
}

void trump_update(std::vector<double>& rates, std::size_t k,
                  const std::vector<const Path*>& paths, const NetworkGraph& graph,
                  const TrumpLinkState& state, double peak_bps, double reference_bps,
                  const TrumpParams& params) {
  double total = std::accumulate(rates.begin(), rates.end(), 0.0);
  if (total > peak_bps) {
    double f = peak_bps / total;
    for (double& x : rates) x *= f;
    return;
  }
  double r = std::max(total / reference_bps, kTrumpFloor);
  double price = 0;
  for (LinkIndex l : paths[k]->links) {
    price += params.w * reference_bps / graph.link(l).capacity_bps;
    if (!state.price.empty()) price += state.price[l];
  }
  rates[k] = std::max(0.0, rates[k] + params.gamma * (1.0 / r - price) * reference_bps);
}

}  // namespace mpath
