#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mpath/error.h"
#include "mpath/fluid.h"
#include "mpath/maxmin.h"

namespace mpath {

std::vector<int> RateTimeSeries::demand_ids() const {
  std::vector<int> ids;
  for (const SeriesPath& p : paths) {
    if (ids.empty() || ids.back() != p.demand_id) ids.push_back(p.demand_id);
  }
  return ids;
}

std::vector<double> RateTimeSeries::demand_total(int demand_id) const {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t s = 0; s < times.size(); ++s) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (paths[i].demand_id == demand_id) out[s] += rates[s][i];
    }
  }
  return out;
}

std::vector<double> RateTimeSeries::consumed_bandwidth() const {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t s = 0; s < times.size(); ++s) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
      out[s] += rates[s][i] * static_cast<double>(paths[i].hops);
    }
  }
  return out;
}

SplitReport steady_state_split_check(const RateTimeSeries& series,
                                     const PathAllocation& reference, double t_start_s,
                                     double t_end_s, double window_fraction) {
  if (!(window_fraction > 0 && window_fraction <= 1) || !(t_end_s > t_start_s)) {
    throw Error(ErrorCode::kInvalidConfig, "bad averaging window");
  }
  double from = t_end_s - window_fraction * (t_end_s - t_start_s);
  if (series.times.empty() || series.times.back() < t_end_s - 1e-9) {
    throw Error(ErrorCode::kWindowTooShort,
                fmt::format("series ends before t={}", t_end_s));
  }
  std::vector<std::size_t> window;
  for (std::size_t s = 0; s < series.times.size(); ++s) {
    if (series.times[s] >= from - 1e-12 && series.times[s] < t_end_s - 1e-12) window.push_back(s);
  }
  if (window.empty()) {
    throw Error(ErrorCode::kWindowTooShort,
                fmt::format("no sample in [{}, {})", from, t_end_s));
  }
  const double n = static_cast<double>(window.size());

  SplitReport rep;
  for (const PathRates& ref : reference) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < series.paths.size(); ++i) {
      if (series.paths[i].demand_id == ref.demand_id) cols.push_back(i);
    }
    if (cols.size() != ref.rates.size()) {
      throw Error(ErrorCode::kInvalidDemand,
                  fmt::format("demand {}: series has {} paths, reference {}", ref.demand_id,
                              cols.size(), ref.rates.size()));
    }
    std::vector<double> mean(cols.size(), 0.0);
    for (std::size_t s : window) {
      for (std::size_t j = 0; j < cols.size(); ++j) mean[j] += series.rates[s][cols[j]];
    }
    double total = 0;
    for (double& m : mean) {
      m /= n;
      total += m;
    }
    double ref_total = ref.total();
    double dev = ref_total > 0 ? std::abs(total - ref_total) / ref_total
                 : total > 0   ? std::numeric_limits<double>::infinity()
                               : 0.0;
    std::vector<double> path_dev;
    std::vector<char> probing;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      path_dev.push_back(ref_total > 0 ? std::abs(mean[j] - ref.rates[j]) / ref_total : 0.0);
      probing.push_back(ref.rates[j] <= 1e-9 * std::max(ref_total, 1.0) && mean[j] > 0);
    }
    rep.demand_ids.push_back(ref.demand_id);
    rep.mean_total.push_back(total);
    rep.reference_total.push_back(ref_total);
    rep.deviation.push_back(dev);
    rep.mean_path.push_back(std::move(mean));
    rep.path_deviation.push_back(std::move(path_dev));
    rep.probing.push_back(std::move(probing));
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  return rep;
}

PathAllocation link_flow_to_paths(const NetworkGraph& graph, const LinkAllocation& flow,
                                  const DemandSet& demands, const std::vector<PathSet>& paths) {
  if (paths.size() != demands.size()) {
    throw Error(ErrorCode::kInvalidDemand, "need one path set per demand");
  }
  const double tol = 1e-9 * graph.max_capacity();
  PathAllocation out;
  for (std::size_t d = 0; d < demands.size(); ++d) {
    PathRates pr;
    pr.demand_id = demands[d].id;
    pr.paths = paths[d];
    pr.rates.assign(paths[d].size(), 0.0);
    int pos = flow.position(demands[d].id);
    if (pos >= 0) {
      for (const FlowPath& fp : decompose_flow(graph, flow.rates[pos], demands[d].source,
                                               demands[d].destination, tol)) {
        for (std::size_t k = 0; k < paths[d].size(); ++k) {
          if (paths[d][k].links == fp.links) {
            pr.rates[k] += fp.rate;
            break;
          }
        }
      }
    }
    out.push_back(std::move(pr));
  }
  return out;
}

std::vector<double> schedule_epochs(const DemandSet& demands, double horizon_s) {
  std::vector<double> t{0.0, horizon_s};
  for (const Demand& d : demands) {
    for (const PeakStep& s : d.peak.steps()) {
      if (s.t_start_s > 0 && s.t_start_s < horizon_s) t.push_back(s.t_start_s);
    }
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

std::vector<EpochOptimum> epoch_optima(const NetworkGraph& graph, const DemandSet& demands,
                                       const std::vector<PathSet>& paths, double horizon_s) {
  std::vector<double> t = schedule_epochs(demands, horizon_s);
  std::vector<EpochOptimum> out;
  for (std::size_t e = 0; e + 1 < t.size(); ++e) {
    DemandSet active = demands_at(demands, 0.5 * (t[e] + t[e + 1]));
    LinkAllocation full(demands, graph.num_links());
    if (!active.empty()) {
      MaxMinResult mm = maxmin_multipath_allocate(graph, active);
      for (std::size_t i = 0; i < mm.allocation.num_demands(); ++i) {
        int pos = full.position(mm.allocation.demand_ids[i]);
        full.rates[pos] = mm.allocation.rates[i];
        full.totals[pos] = mm.allocation.totals[i];
      }
    }
    out.push_back({t[e], t[e + 1], link_flow_to_paths(graph, full, demands, paths)});
  }
  return out;
}

}  // namespace mpath
