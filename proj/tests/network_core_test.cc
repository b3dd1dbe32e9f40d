#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mpath/allocation.h"
#include "mpath/cost.h"
#include "mpath/error.h"
#include "mpath/graph.h"
#include "mpath/paths.h"

namespace mpath {
namespace {

NetworkGraph triangle(double c = 10e6) {
  return build_graph({1, 2, 3}, bidirectional({{1, 2, c, 1e-3}, {2, 3, c, 1e-3}, {3, 1, c, 1e-3}}));
}

Demand elastic(int id, NodeId s, NodeId d) { return {id, s, d, PeakSchedule()}; }

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kIo;
}

TEST(GraphTest, SmallestBidirectionalGraph) {
  NetworkGraph g = build_graph({1, 2}, {{1, 2, 10e6, 0}, {2, 1, 10e6, 0}});
  EXPECT_EQ(g.num_links(), 2u);
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_TRUE(g.adjacent(2, 1));
}

TEST(GraphTest, TriangleHasSixDirectedLinks) {
  NetworkGraph g = triangle();
  EXPECT_EQ(g.num_links(), 6u);
  for (const Link& l : g.links()) EXPECT_EQ(l.capacity_bps, 10e6);
  for (NodeId a : {1, 2, 3}) {
    for (NodeId b : {1, 2, 3}) EXPECT_EQ(g.adjacent(a, b), a != b);
  }
}

TEST(GraphTest, Rejections) {
  EXPECT_EQ(code_of([] { build_graph({1, 2, 3}, {{1, 2, 1, 0}}); }),
            ErrorCode::kDisconnectedGraph);
  EXPECT_EQ(code_of([] { build_graph({1, 2}, {{1, 2, 1, 0}, {1, 2, 2, 0}}); }),
            ErrorCode::kDuplicateLink);
  EXPECT_EQ(code_of([] { build_graph({1, 2}, {{1, 2, 0, 0}}); }),
            ErrorCode::kNonPositiveCapacity);
  EXPECT_EQ(code_of([] { build_graph({1, 2}, {{1, 2, 1, -1}}); }), ErrorCode::kInvalidGraph);
  EXPECT_EQ(code_of([] { build_graph({1, 2}, {{1, 7, 1, 0}}); }), ErrorCode::kInvalidGraph);
}

TEST(PathsTest, TriangleHasTwoSimplePaths) {
  NetworkGraph g = triangle();
  PathSet ps = enumerate_paths(g, elastic(1, 1, 2), 2);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].nodes, (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(ps[1].nodes, (std::vector<NodeId>{1, 3, 2}));
  PathSet one = enumerate_paths(g, elastic(1, 1, 2), 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].hops(), 1u);
  // Asking for more does not invent paths.
  EXPECT_EQ(enumerate_paths(g, elastic(1, 1, 2), 10).size(), 2u);
}

TEST(PathsTest, CapacityBreaksHopTies) {
  // 1->2->4 is thin, 1->3->4 is fat: fat one first.
  NetworkGraph g = build_graph(
      {1, 2, 3, 4}, {{1, 2, 1, 0}, {2, 4, 1, 0}, {1, 3, 5, 0}, {3, 4, 5, 0}});
  PathSet ps = enumerate_paths(g, elastic(1, 1, 4), 4);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].nodes, (std::vector<NodeId>{1, 3, 4}));
}

TEST(PathsTest, HopLimitAndUnreachable) {
  NetworkGraph g = triangle();
  EXPECT_EQ(enumerate_paths(g, elastic(1, 1, 2), 4, 1).size(), 1u);
  NetworkGraph oneway = build_graph({1, 2}, {{1, 2, 1, 0}});
  EXPECT_EQ(code_of([&] { enumerate_paths(oneway, elastic(1, 2, 1), 4); }),
            ErrorCode::kNoPathExists);
}

TEST(CostTest, MM1Examples) {
  EXPECT_DOUBLE_EQ(mm1_link_cost(0, 10), 0.0);
  EXPECT_DOUBLE_EQ(mm1_link_cost(5, 10), 1.0);
  EXPECT_NEAR(mm1_link_cost(9, 10), 9.0, 1e-12);
  EXPECT_EQ(code_of([] { mm1_link_cost(10, 10); }), ErrorCode::kSaturatedLink);
}

TEST(CostTest, FirstDerivativeLengthExamples) {
  NetworkGraph g = build_graph({1, 2, 3}, {{1, 2, 1, 0}, {2, 3, 1, 0}});
  PathSet one = enumerate_paths(g, elastic(1, 1, 2), 1);
  PathSet two = enumerate_paths(g, elastic(1, 1, 3), 1);
  std::vector<double> empty(2, 0.0);
  EXPECT_DOUBLE_EQ(first_derivative_length(g, one[0], empty), 1.0);
  EXPECT_DOUBLE_EQ(first_derivative_length(g, two[0], empty), 2.0);
  EXPECT_DOUBLE_EQ(first_derivative_length(g, one[0], {0.5, 0.0}), 4.0);
}

TEST(CostTest, LoadsAndTotals) {
  NetworkGraph g = build_graph({1, 2}, {{1, 2, 10, 0}, {2, 1, 10, 0}});
  DemandSet ds{elastic(1, 1, 2), elastic(2, 1, 2)};
  LinkAllocation a(ds, g.num_links());
  EXPECT_EQ(link_loads(a, g), (std::vector<double>{0, 0}));
  EXPECT_EQ(total_network_cost(a, g, CostKind::kMM1), 0.0);
  a.rates[0][0] = 5;
  EXPECT_DOUBLE_EQ(link_loads(a, g)[0], 0.5);
  EXPECT_DOUBLE_EQ(total_network_cost(a, g, CostKind::kLinear), 0.5);
  EXPECT_DOUBLE_EQ(total_network_cost(a, g, CostKind::kMM1), 1.0);
  a.rates[0][0] = 4;
  a.rates[1][0] = 6;
  EXPECT_DOUBLE_EQ(link_loads(a, g)[0], 1.0);
}

PathAllocation one_demand(const NetworkGraph& g, std::vector<double> rates) {
  PathRates pr;
  pr.demand_id = 1;
  pr.paths = enumerate_paths(g, elastic(1, 1, 2), 2);
  pr.rates = std::move(rates);
  return {pr};
}

TEST(CostTest, GoodputToCostRatio) {
  NetworkGraph g = triangle();
  EXPECT_DOUBLE_EQ(goodput_to_cost_ratio(one_demand(g, {3, 0})), 1.0);
  EXPECT_DOUBLE_EQ(goodput_to_cost_ratio(one_demand(g, {0, 3})), 0.5);
  EXPECT_NEAR(goodput_to_cost_ratio(one_demand(g, {3, 3})), 2.0 / 3.0, 1e-15);
}

TEST(CostProperty, MM1IncreasingAndConvex) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double c = 1 + 99 * u(rng);
    double a = c * u(rng), b = c * u(rng);
    if (a > b) std::swap(a, b);
    if (!(b - a > 1e-9 * c) || b >= c) continue;
    EXPECT_LT(mm1_link_cost(a, c), mm1_link_cost(b, c));
    EXPECT_LE(mm1_link_cost(0.5 * (a + b), c),
              0.5 * (mm1_link_cost(a, c) + mm1_link_cost(b, c)) * (1 + 1e-12));
  }
}

TEST(CostProperty, DerivativeLengthMatchesFiniteDifference) {
  NetworkGraph g = build_graph({1, 2, 3, 4}, bidirectional({{1, 2, 10, 0}, {2, 3, 7, 0},
                                                           {3, 4, 4, 0}, {1, 4, 3, 0},
                                                           {1, 3, 6, 0}}));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  PathSet ps = enumerate_paths(g, elastic(1, 1, 4), 8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> flow(g.num_links());
    for (LinkIndex l = 0; l < g.num_links(); ++l) flow[l] = u(rng) * g.link(l).capacity_bps;
    for (const Path& p : ps) {
      const double h = 1e-5;
      std::vector<double> up = flow, down = flow;
      for (LinkIndex l : p.links) {
        up[l] += h;
        down[l] -= h;
      }
      double fd = (total_network_cost(up, g, CostKind::kMM1) -
                   total_network_cost(down, g, CostKind::kMM1)) /
                  (2 * h);
      double an = first_derivative_length(g, p, flow);
      EXPECT_LE(std::abs(fd - an) / an, 1e-4);
    }
  }
}

TEST(CostProperty, GcrRange) {
  NetworkGraph g = triangle();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng);
    if (a + b == 0) continue;
    double gcr = goodput_to_cost_ratio(one_demand(g, {a, b}));
    EXPECT_GT(gcr, 0.0);
    EXPECT_LE(gcr, 1.0);
    if (b > 0) EXPECT_LT(gcr, 1.0);
  }
}

TEST(AllocationProperty, PathToLinkConsistency) {
  NetworkGraph g = build_graph({1, 2, 3, 4}, bidirectional({{1, 2, 10, 0}, {2, 3, 7, 0},
                                                           {3, 4, 4, 0}, {1, 4, 3, 0}}));
  DemandSet ds{elastic(1, 1, 3), elastic(2, 4, 2), elastic(3, 2, 1)};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  PathAllocation pa;
  for (const Demand& d : ds) {
    PathRates pr;
    pr.demand_id = d.id;
    pr.paths = enumerate_paths(g, d, 4);
    for (std::size_t k = 0; k < pr.paths.size(); ++k) pr.rates.push_back(u(rng));
    pa.push_back(pr);
  }
  LinkAllocation la = expand_to_links(pa, g);
  std::vector<double> direct = path_link_aggregates(pa, g);
  std::vector<double> summed = la.aggregate();
  for (LinkIndex l = 0; l < g.num_links(); ++l) EXPECT_NEAR(summed[l], direct[l], 1e-9);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_NEAR(la.totals[i], pa[i].total(), 1e-12);
  for (double r : conservation_residuals(la, g, ds)) EXPECT_LE(r, 1e-9);
}

TEST(AllocationTest, DecomposeFlowRecoversPaths) {
  NetworkGraph g = triangle(1);
  std::vector<double> flow(g.num_links(), 0.0);
  flow[*g.find_link(1, 2)] = 0.7;
  flow[*g.find_link(1, 3)] = 0.2;
  flow[*g.find_link(3, 2)] = 0.2;
  std::vector<FlowPath> fp = decompose_flow(g, flow, 1, 2, 1e-12);
  ASSERT_EQ(fp.size(), 2u);
  EXPECT_EQ(fp[0].links.size(), 1u);
  EXPECT_NEAR(fp[0].rate, 0.7, 1e-15);
  EXPECT_NEAR(fp[1].rate, 0.2, 1e-15);
}

TEST(DemandTest, ScheduleAndValidation) {
  PeakSchedule s({{5, 30e6}, {10, 50e6}});
  EXPECT_EQ(s.at(0), 0.0);
  EXPECT_EQ(s.at(5), 30e6);
  EXPECT_EQ(s.at(12), 50e6);
  NetworkGraph g = triangle();
  EXPECT_EQ(code_of([&] { validate_demands(g, {elastic(1, 1, 1)}); }), ErrorCode::kInvalidDemand);
  EXPECT_EQ(code_of([&] { validate_demands(g, {elastic(1, 1, 9)}); }), ErrorCode::kInvalidDemand);
  EXPECT_EQ(code_of([&] { validate_demands(g, {elastic(1, 1, 2), elastic(1, 2, 3)}); }),
            ErrorCode::kInvalidDemand);
  // Duplicate (s, e) pairs are distinct demands.
  validate_demands(g, {elastic(1, 1, 2), elastic(2, 1, 2)});
}

}  // namespace
}  // namespace mpath
