#include <algorithm>
#include <numeric>

#include "mpath/error.h"
#include "mpath/maxmin.h"
#include "mpath/scenarios.h"

namespace mpath {
namespace {

struct Moments {
  double sum = 0, sum_sq = 0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double variance() const {
    if (n == 0) return 0.0;
    double m = mean();
    return std::max(0.0, sum_sq / n - m * m);
  }
};

double carried(const std::vector<double>& rates) {
  return std::accumulate(rates.begin(), rates.end(), 0.0);
}

}  // namespace

ExperimentReport run_benchmark_suite(const ScenarioSpec& spec) {
  if (spec.runs < 1) throw Error(ErrorCode::kInvalidConfig, "runs must be >= 1");
  ExperimentReport report;
  report.spec = spec;
  Moments gain, mp_carried, mc_carried, mp_sat, mc_sat;
  std::vector<Moments> mp_dec(10), mc_dec(10);
  for (int r = 0; r < spec.runs; ++r) {
    RunRecord rec;
    rec.run_id = r;
    rec.seed = spec.seed + static_cast<std::uint64_t>(r);
    NetworkGraph graph =
        make_topology(spec.topology, spec.mean_capacity_bps, rec.seed, spec.capacity_noise);
    rec.demands = spec.pattern == TrafficPattern::kUniform
                      ? uniform_traffic_matrix(graph, rec.seed)
                      : hotspot_traffic_matrix(graph, spec.sources, spec.flows_per_source,
                                               spec.sink, rec.seed);
    rec.multipath_rate = maxmin_multipath_allocate(graph, rec.demands).totals();
    rec.mincost_rate = mincost_singlepath_allocate(graph, rec.demands).totals();
    rec.multipath_satisfaction = satisfaction_profile(graph, rec.demands, rec.multipath_rate);
    rec.mincost_satisfaction = satisfaction_profile(graph, rec.demands, rec.mincost_rate);
    rec.multipath_carried = carried(rec.multipath_rate);
    rec.mincost_carried = carried(rec.mincost_rate);
    rec.gain = rec.mincost_carried > 0
                   ? (rec.multipath_carried - rec.mincost_carried) / rec.mincost_carried
                   : 0.0;
    gain.add(rec.gain);
    mp_carried.add(rec.multipath_carried);
    mc_carried.add(rec.mincost_carried);

    const std::size_t n = rec.demands.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rec.demands[a].peak_at(0) < rec.demands[b].peak_at(0);
    });
    for (std::size_t rank = 0; rank < n; ++rank) {
      std::size_t i = order[rank];
      std::size_t dec = rank * 10 / n;
      mp_dec[dec].add(rec.multipath_satisfaction[i]);
      mc_dec[dec].add(rec.mincost_satisfaction[i]);
      mp_sat.add(rec.multipath_satisfaction[i]);
      mc_sat.add(rec.mincost_satisfaction[i]);
    }
    report.runs.push_back(std::move(rec));
  }
  report.mean_gain = gain.mean();
  report.multipath_mean_carried = mp_carried.mean();
  report.mincost_mean_carried = mc_carried.mean();
  report.multipath_satisfaction_variance = mp_sat.variance();
  report.mincost_satisfaction_variance = mc_sat.variance();
  for (int d = 0; d < 10; ++d) {
    if (mp_dec[d].n == 0) continue;
    report.deciles.push_back({d, mp_dec[d].mean(), mp_dec[d].variance(), mc_dec[d].mean(),
                              mc_dec[d].variance()});
  }
  return report;
}

}  // namespace mpath
