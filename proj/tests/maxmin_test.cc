#include <algorithm>
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "mpath/allocation.h"
#include "mpath/error.h"
#include "mpath/lp.h"
#include "mpath/maxmin.h"
#include "mpath/paths.h"
#include "mpath/scenarios.h"
#include "testing.h"

namespace mpath {
namespace {

using testing::CorpusInstance;
using testing::load_corpus;
using testing::rel_err;

Demand demand(int id, NodeId s, NodeId d, double peak = kElastic) {
  return {id, s, d, PeakSchedule::constant(peak)};
}

NetworkGraph single_link(double c) { return build_graph({1, 2}, {{1, 2, c, 1e-3}}); }

const std::vector<CorpusInstance>& corpus() {
  static const std::vector<CorpusInstance> c = load_corpus("maxmin_corpus.yaml");
  return c;
}

TEST(FillIterationTest, SharedLinkSplitsEvenly) {
  NetworkGraph g = single_link(10);
  DemandSet ds{demand(1, 1, 2), demand(2, 1, 2)};
  FillResult f = maxmin_fill_iteration(g, ds, {0, 0}, {1, 1});
  EXPECT_NEAR(f.z_bps, 5.0, 1e-9);
}

TEST(FillIterationTest, SmallestPeakBindsZ) {
  NetworkGraph g = single_link(10);
  DemandSet ds{demand(1, 1, 2, 3), demand(2, 1, 2)};
  EXPECT_NEAR(maxmin_fill_iteration(g, ds, {0, 0}, {1, 1}).z_bps, 3.0, 1e-9);
}

TEST(FillIterationTest, TriangleUnitCapacities) {
  NetworkGraph g = build_graph({1, 2, 3}, bidirectional({{1, 2, 1, 0}, {2, 3, 1, 0}, {3, 1, 1, 0}}));
  DemandSet ds{demand(1, 1, 2), demand(2, 3, 2)};
  // Oracle: both demands at 1 (node 2 has two unit in-links).
  EXPECT_NEAR(maxmin_fill_iteration(g, ds, {0, 0}, {1, 1}).z_bps, 1.0, 1e-9);
}

TEST(ResidualTest, Examples) {
  NetworkGraph g = single_link(10);
  DemandSet ds{demand(1, 1, 2)};
  LinkAllocation a(ds, 1);
  ResidualGraph r = reduce_to_residual(g, a);
  EXPECT_EQ(r.capacity[0], 10.0);
  EXPECT_FALSE(r.removed[0]);
  a.rates[0][0] = 4;
  EXPECT_NEAR(reduce_to_residual(g, a).capacity[0], 6.0, 1e-12);
  a.rates[0][0] = 10;
  r = reduce_to_residual(g, a);
  EXPECT_TRUE(r.removed[0]);
  EXPECT_EQ(r.capacity[0], 0.0);
  a.rates[0][0] = 11;
  EXPECT_THROW(reduce_to_residual(g, a), Error);
}

TEST(FrozenTest, Examples) {
  NetworkGraph g = single_link(10);
  ResidualGraph open{{10.0}, {0}};
  ResidualGraph cut{{0.0}, {1}};
  EXPECT_TRUE(is_demand_frozen(g, open, demand(1, 1, 2, 3), 3));
  EXPECT_TRUE(is_demand_frozen(g, cut, demand(1, 1, 2), 2));
  EXPECT_FALSE(is_demand_frozen(g, open, demand(1, 1, 2), 2));
}

TEST(MaxMinTest, TwoStageWaterFilling) {
  MaxMinResult r = maxmin_multipath_allocate(single_link(10), {demand(1, 1, 2, 3), demand(2, 1, 2)});
  EXPECT_NEAR(r.total(1), 3.0, 1e-9);
  EXPECT_NEAR(r.total(2), 7.0, 1e-9);
  ASSERT_EQ(r.trace.iterations.size(), 2u);
  EXPECT_EQ(r.trace.iterations[0].frozen_ids, std::vector<int>{1});
}

TEST(MaxMinTest, ThreeDemandsWithPeaks) {
  MaxMinResult r = maxmin_multipath_allocate(
      single_link(12), {demand(1, 1, 2, 2), demand(2, 1, 2, 5), demand(3, 1, 2)});
  EXPECT_NEAR(r.total(1), 2.0, 1e-9);
  EXPECT_NEAR(r.total(2), 5.0, 1e-9);
  EXPECT_NEAR(r.total(3), 5.0, 1e-9);
}

TEST(MaxMinTest, UnroutableDemand) {
  NetworkGraph g = single_link(1);
  try {
    maxmin_multipath_allocate(g, {demand(1, 2, 1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoPathExists);
  }
}

TEST(MinCostTest, Examples) {
  NetworkGraph disjoint = build_graph({1, 2, 3, 4}, bidirectional({{1, 2, 10, 0}, {3, 4, 10, 0},
                                                                  {2, 3, 10, 0}}));
  MaxMinResult a = mincost_singlepath_allocate(disjoint, {demand(1, 1, 2, 4), demand(2, 3, 4, 6)});
  EXPECT_NEAR(a.total(1), 4.0, 1e-9);
  EXPECT_NEAR(a.total(2), 6.0, 1e-9);
  MaxMinResult b = mincost_singlepath_allocate(single_link(10), {demand(1, 1, 2), demand(2, 1, 2)});
  EXPECT_NEAR(b.total(1), 5.0, 1e-9);
  EXPECT_NEAR(b.total(2), 5.0, 1e-9);
  NetworkGraph tri = build_graph({1, 2, 3}, bidirectional({{1, 2, 10, 0}, {2, 3, 10, 0}, {3, 1, 10, 0}}));
  MaxMinResult c = mincost_singlepath_allocate(tri, {demand(1, 1, 2), demand(2, 3, 2)});
  EXPECT_NEAR(c.total(1), 10.0, 1e-9);
  EXPECT_NEAR(c.total(2), 10.0, 1e-9);
  // Multipath can use the relay links on top.
  MaxMinResult m = maxmin_multipath_allocate(tri, {demand(1, 1, 2), demand(2, 3, 2)});
  EXPECT_NEAR(m.total(1), 10.0, 1e-9);
}

TEST(SatisfactionTest, Examples) {
  NetworkGraph g = single_link(10);
  std::vector<double> s =
      satisfaction_profile(g, {demand(1, 1, 2, 3), demand(2, 1, 2, 14), demand(3, 1, 2)},
                           {3, 7, 10});
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
  EXPECT_DOUBLE_EQ(s[2], 1.0);
}

// --- Oracle corpus ---------------------------------------------------------

TEST(MaxMinOracle, CorpusTotalsMatch) {
  ASSERT_GE(corpus().size(), 200u);
  for (const CorpusInstance& c : corpus()) {
    MaxMinResult r = maxmin_multipath_allocate(c.graph, c.demands);
    ASSERT_EQ(r.allocation.totals.size(), c.expected.size());
    for (std::size_t i = 0; i < c.expected.size(); ++i) {
      EXPECT_LE(rel_err(r.allocation.totals[i], c.expected[i]), 1e-6)
          << "instance " << c.id << " demand " << c.demands[i].id << ": "
          << r.allocation.totals[i] << " vs " << c.expected[i];
    }
  }
}

TEST(MaxMinOracle, AbileneHotspotInstance) {
  std::vector<CorpusInstance> fx = load_corpus("abilene_hotspot_seed8.yaml");
  ASSERT_EQ(fx.size(), 1u);
  MaxMinResult r = maxmin_multipath_allocate(fx[0].graph, fx[0].demands);
  for (std::size_t i = 0; i < fx[0].expected.size(); ++i) {
    EXPECT_LE(rel_err(r.allocation.totals[i], fx[0].expected[i]), 1e-6) << "demand " << i + 1;
  }
}

TEST(MaxMinProperty, FeasibleAndConserving) {
  for (const CorpusInstance& c : corpus()) {
    MaxMinResult r = maxmin_multipath_allocate(c.graph, c.demands);
    std::vector<double> agg = r.allocation.aggregate();
    for (LinkIndex l = 0; l < c.graph.num_links(); ++l) {
      EXPECT_LE(agg[l], c.graph.link(l).capacity_bps + 1e-9) << "instance " << c.id;
    }
    std::vector<double> res = conservation_residuals(r.allocation, c.graph, c.demands);
    for (std::size_t i = 0; i < res.size(); ++i) {
      EXPECT_LE(res[i], 1e-6 * std::max(1.0, r.allocation.totals[i])) << "instance " << c.id;
    }
    for (const auto& row : r.allocation.rates) {
      for (double x : row) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(MaxMinProperty, TraceSanity) {
  for (const CorpusInstance& c : corpus()) {
    MaxMinResult r = maxmin_multipath_allocate(c.graph, c.demands);
    double level = 0;
    std::map<int, double> frozen_at;
    for (const MaxMinIteration& it : r.trace.iterations) {
      EXPECT_GE(it.z_bps, 0.0);
      level += it.z_bps;
      EXPECT_NEAR(it.level_bps, level, 1e-9 * std::max(1.0, level));
      for (int id : it.frozen_ids) frozen_at[id] = it.level_bps;
    }
    ASSERT_EQ(frozen_at.size(), c.demands.size()) << "instance " << c.id;
    for (const Demand& d : c.demands) {
      double got = r.total(d.id);
      double p = d.peak_at(0);
      bool at_share = rel_err(got, frozen_at[d.id]) <= 1e-6;
      bool at_peak = !is_elastic(p) && rel_err(got, p) <= 1e-6;
      EXPECT_TRUE(at_share || at_peak) << "instance " << c.id << " demand " << d.id;
    }
  }
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// a >= b lexicographically, with a relative tolerance per entry.
bool lex_geq(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (rel_err(a[i], b[i]) <= 1e-6) continue;
    return a[i] > b[i];
  }
  return true;
}

TEST(MaxMinProperty, MoreCapacityNeverHurts) {
  int checked = 0;
  for (const CorpusInstance& c : corpus()) {
    std::vector<double> base = sorted(maxmin_multipath_allocate(c.graph, c.demands).totals());
    for (LinkIndex l = 0; l < c.graph.num_links() && l < 4; ++l) {
      std::vector<double> caps = c.graph.capacities();
      caps[l] += 1;
      std::vector<double> more =
          sorted(maxmin_multipath_allocate(c.graph.with_capacities(caps), c.demands).totals());
      EXPECT_TRUE(lex_geq(more, base)) << "instance " << c.id << " link " << l;
      ++checked;
    }
  }
  EXPECT_GT(checked, 500);
}

// Max-min property, checked on a path formulation that aggregates demands by
// (source, sink): demand d cannot gain unless some demand whose total is at
// most d's loses.
double best_gain(const NetworkGraph& g, const DemandSet& ds, const std::vector<double>& totals,
                 std::size_t d) {
  std::map<std::pair<NodeId, NodeId>, double> need;
  for (std::size_t e = 0; e < ds.size(); ++e) {
    auto key = std::make_pair(ds[e].source, ds[e].destination);
    need[key] += 0.0;
    if (e != d && totals[e] <= totals[d] * (1 + 1e-9)) need[key] += totals[e];
  }
  const auto dkey = std::make_pair(ds[d].source, ds[d].destination);
  need[dkey] += totals[d];
  const double S = g.max_capacity();
  LinearProgram lp;
  double room = is_elastic(ds[d].peak_at(0)) ? kLpInfinity : (ds[d].peak_at(0) - totals[d]) / S;
  int gain = lp.add_var(0, std::max(0.0, room), 1.0);
  std::vector<LinearConstraint> cap(g.num_links());
  for (LinkIndex l = 0; l < g.num_links(); ++l) cap[l].rhs = g.link(l).capacity_bps / S;
  for (const auto& [key, amount] : need) {
    PathSet ps = enumerate_paths(g, demand(0, key.first, key.second), 1000);
    LinearConstraint row;
    row.rhs = -amount / S;
    for (const Path& p : ps) {
      int v = lp.add_var();
      row.terms.push_back({v, -1.0});
      for (LinkIndex l : p.links) cap[l].terms.push_back({v, 1.0});
    }
    if (key == dkey) row.terms.push_back({gain, 1.0});
    lp.inequalities.push_back(row);
  }
  for (auto& row : cap) {
    if (!row.terms.empty()) lp.inequalities.push_back(row);
  }
  LPSolution s = solve_linear_program(lp);
  if (s.status != LPStatus::kOptimal) return 0.0;
  return s.values[gain] * S;
}

void expect_maxmin_property(const NetworkGraph& g, const DemandSet& ds, const std::string& tag) {
  MaxMinResult r = maxmin_multipath_allocate(g, ds);
  std::vector<double> totals = r.totals();
  std::map<std::pair<std::pair<NodeId, NodeId>, double>, bool> seen;
  for (std::size_t d = 0; d < ds.size(); ++d) {
    double p = ds[d].peak_at(0);
    if (!is_elastic(p) && totals[d] >= p * (1 - 1e-9)) continue;
    // Same pair and same total give the same probe.
    auto key = std::make_pair(std::make_pair(ds[d].source, ds[d].destination), totals[d]);
    if (!seen.emplace(key, true).second) continue;
    EXPECT_LE(best_gain(g, ds, totals, d), 1e-6 * g.max_capacity())
        << tag << " demand " << ds[d].id;
  }
}

TEST(MaxMinProperty, NoDemandCanGainAtTheExpenseOfLarger) {
  for (const CorpusInstance& c : corpus()) {
    expect_maxmin_property(c.graph, c.demands, "instance " + std::to_string(c.id));
  }
}

TEST(MaxMinProperty, AbileneHotspotSeed42) {
  NetworkGraph g = make_topology("abilene", 100e6, 42, true);
  DemandSet ds = hotspot_traffic_matrix(g, 4, 25, kDefaultSink, 42);
  expect_maxmin_property(g, ds, "abilene seed 42");
}

TEST(MaxMinTest, Deterministic) {
  const CorpusInstance& c = corpus().back();
  MaxMinResult a = maxmin_multipath_allocate(c.graph, c.demands);
  MaxMinResult b = maxmin_multipath_allocate(c.graph, c.demands);
  EXPECT_EQ(a.allocation.rates, b.allocation.rates);
}

}  // namespace
}  // namespace mpath
