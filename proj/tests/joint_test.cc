#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mpath/cost.h"
#include "mpath/error.h"
#include "mpath/joint.h"
#include "mpath/paths.h"
#include "mpath/scenarios.h"

namespace mpath {
namespace {

Demand demand(int id, NodeId s, NodeId d, double peak = kElastic) {
  return {id, s, d, PeakSchedule::constant(peak)};
}

JointProblem make_problem(NetworkGraph g, DemandSet ds, int max_paths = 8) {
  JointProblem p;
  p.graph = std::move(g);
  p.demands = std::move(ds);
  for (const Demand& d : p.demands) p.paths.push_back(enumerate_paths(p.graph, d, max_paths));
  return p;
}

JointProblem toy(const std::string& topology, double ratio) {
  JointProblem p = make_problem(make_toy_topology(topology, 10e6, ratio), toy_demands(), 64);
  p.utility_unit_bps = 1e9;
  return p;
}

double share_on_hops(const PathRates& pr, std::size_t hops) {
  double s = 0;
  for (std::size_t k = 0; k < pr.paths.size(); ++k) {
    if (pr.paths[k].hops() == hops) s += pr.rates[k];
  }
  return s / pr.total();
}

// Instances for the property checks: toys at a few ratios plus small random
// meshes with two or three demands.
std::vector<JointProblem> property_instances() {
  std::vector<JointProblem> out;
  for (const char* t : {"triangle", "square"}) {
    for (double r : {1.0, 3.0, 15.0}) out.push_back(toy(t, r));
  }
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> cap(1, 4);
  for (int i = 0; i < 6; ++i) {
    int n = 4 + i % 2;
    std::vector<Link> und;
    for (int a = 1; a <= n; ++a) {
      for (int b = a + 1; b <= n; ++b) {
        if (b == a + 1 || rng() % 2) und.push_back({a, b, 1e6 * cap(rng), 1e-3});
      }
    }
    std::vector<NodeId> nodes;
    for (int a = 1; a <= n; ++a) nodes.push_back(a);
    DemandSet ds{demand(1, 1, n), demand(2, 2, n - 1)};
    if (i % 3 == 0) ds.push_back(demand(3, n, 1, 0.3e6));
    JointProblem p = make_problem(build_graph(nodes, bidirectional(und)), ds, 6);
    p.utility.alpha = i % 2 ? 1.0 : 2.0;
    out.push_back(std::move(p));
  }
  return out;
}

TEST(UtilityTest, Examples) {
  EXPECT_DOUBLE_EQ(alpha_utility(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(alpha_utility_gradient(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(alpha_utility(2, 2), -0.5);
  EXPECT_DOUBLE_EQ(alpha_utility_gradient(2, 2), 0.25);
  EXPECT_DOUBLE_EQ(alpha_utility(5, 0), 5.0);
  EXPECT_DOUBLE_EQ(alpha_utility_gradient(5, 0), 1.0);
  EXPECT_DOUBLE_EQ(alpha_utility(2, 2, 3), -1.5);
  EXPECT_THROW(alpha_utility(0, 2), Error);
  EXPECT_DOUBLE_EQ(alpha_utility(0, 0), 0.0);
}

TEST(UtilityTest, CurvatureMatchesGradientDifference) {
  for (double alpha : {0.0, 0.5, 1.0, 2.0, 3.5}) {
    for (double x : {0.3, 1.0, 4.0}) {
      double h = 1e-6 * x;
      double fd = (alpha_utility_gradient(x + h, alpha) - alpha_utility_gradient(x - h, alpha)) /
                  (2 * h);
      EXPECT_NEAR(alpha_utility_curvature(x, alpha), fd, 1e-6 * (1 + std::abs(fd)));
    }
  }
}

TEST(CoordinatedTest, SinglePathClosedForm) {
  JointProblem p = make_problem(build_graph({1, 2}, {{1, 2, 10e6, 1e-3}}), {demand(1, 1, 2)});
  JointSolution s = solve_coordinated(p);
  ASSERT_TRUE(s.converged);
  // x^-2 = c/(c-x)^2 in Mb/s, x = 10/(1+sqrt 10); a 1-D grid search agrees
  // to 1e-6.
  EXPECT_NEAR(s.totals[0], 2402530.7335204, 1e-6 * 2.4e6);
}

TEST(CoordinatedTest, TriangleUsesShortestPath) {
  JointSolution s = solve_coordinated(toy("triangle", 1));
  ASSERT_TRUE(s.converged);
  for (const PathRates& pr : s.allocation) EXPECT_GE(share_on_hops(pr, 1), 0.99);
}

TEST(CoordinatedTest, PeakBelowOptimumIsPinned) {
  JointProblem p = make_problem(build_graph({1, 2}, {{1, 2, 10e6, 1e-3}}), {demand(1, 1, 2, 1e6)});
  JointSolution s = solve_coordinated(p);
  EXPECT_NEAR(s.totals[0], 1e6, 1e-6 * 1e6);
}

TEST(CoordinatedTest, RejectsWrongMode) {
  JointProblem p = toy("triangle", 1);
  p.mode = Coordination::kUncoordinated;
  EXPECT_THROW(solve_coordinated(p), Error);
}

TEST(UncoordinatedTest, TriangleSplitsEvenly) {
  JointProblem p = toy("triangle", 1);
  p.mode = Coordination::kUncoordinated;
  JointSolution s = solve_uncoordinated(p);
  ASSERT_TRUE(s.converged);
  for (const PathRates& pr : s.allocation) EXPECT_NEAR(share_on_hops(pr, 1), 0.5, 0.01);
}

TEST(UncoordinatedTest, SinglePathEqualsCoordinated) {
  JointProblem p = make_problem(build_graph({1, 2}, {{1, 2, 10e6, 1e-3}}), {demand(1, 1, 2)});
  JointSolution cm = solve_coordinated(p);
  p.mode = Coordination::kUncoordinated;
  JointSolution um = solve_uncoordinated(p);
  EXPECT_NEAR(um.totals[0], cm.totals[0], 1e-6 * cm.totals[0]);
}

TEST(UncoordinatedTest, IdenticalParallelPathsSplitEvenly) {
  NetworkGraph g = build_graph({1, 2, 3, 4}, {{1, 3, 10e6, 0}, {3, 2, 10e6, 0},
                                              {1, 4, 10e6, 0}, {4, 2, 10e6, 0}});
  for (Coordination mode : {Coordination::kCoordinated, Coordination::kUncoordinated}) {
    JointProblem p = make_problem(g, {demand(1, 1, 2)});
    p.mode = mode;
    JointSolution s = solve_joint(p);
    EXPECT_NEAR(s.allocation[0].rates[0], s.allocation[0].rates[1], 1e-6 * s.totals[0]);
  }
}

TEST(SweepTest, GcrGapAtRatioOneAndParityAtFifteen) {
  SweepSettings st;
  SweepPoint one = solve_toy("triangle", 1, st);
  EXPECT_GE(one.coordinated.gcr / one.uncoordinated.gcr, 1.2);
  SweepPoint fifteen = solve_toy("triangle", 15, st);
  EXPECT_NEAR(fifteen.coordinated.gcr / fifteen.uncoordinated.gcr, 1.0, 0.05);
}

TEST(SweepTest, TriangleUncoordinatedGcrIsFlat) {
  SweepSettings st;
  for (int r = 1; r <= 15; ++r) st.ratios.push_back(r);
  std::vector<SweepPoint> pts = sweep_capacity_ratio(st);
  double lo = 1e9, hi = 0;
  for (const SweepPoint& p : pts) {
    lo = std::min(lo, p.uncoordinated.gcr);
    hi = std::max(hi, p.uncoordinated.gcr);
  }
  EXPECT_LE(hi / lo - 1, 0.02);
}

TEST(SweepTest, Validation) {
  SweepSettings st;
  EXPECT_THROW(solve_toy("triangle", 0.5, st), Error);
  EXPECT_THROW(solve_toy("triangle", 16, st), Error);
  try {
    solve_toy("pentagon", 2, st);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownTopology);
  }
}

// --- Properties ------------------------------------------------------------

TEST(JointProperty, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (JointProblem p : property_instances()) {
    for (Coordination mode : {Coordination::kCoordinated, Coordination::kUncoordinated}) {
      p.mode = mode;
      JointObjective f(p);
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> v(f.size());
        for (double& x : v) x = u(rng);
        double util = f.max_utilisation(v);
        for (double& x : v) x *= 0.9 / util * u(rng) + 0.01;
        if (f.max_utilisation(v) >= 0.95) continue;
        std::vector<double> g = f.gradient(v);
        double gmax = 0;
        for (double gi : g) gmax = std::max(gmax, std::abs(gi));
        for (std::size_t i = 0; i < v.size(); ++i) {
          double h = 1e-6 * std::max(v[i], 1e-3);
          std::vector<double> up = v, down = v;
          up[i] += h;
          down[i] -= h;
          double fd = (f.value(up) - f.value(down)) / (2 * h);
          EXPECT_LE(std::abs(fd - g[i]) / std::max(std::abs(g[i]), 1e-6 * gmax), 1e-4)
              << "component " << i;
        }
      }
    }
  }
}

TEST(JointProperty, HessianMatchesGradientDifferences) {
  JointProblem p = property_instances()[7];
  JointObjective f(p);
  std::vector<double> v(f.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.02 * (1 + i % 3);
  ASSERT_LT(f.max_utilisation(v), 0.9);
  std::vector<double> hess = f.hessian(v);
  const std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) {
    double h = 1e-7;
    std::vector<double> up = v, down = v;
    up[j] += h;
    down[j] -= h;
    std::vector<double> gu = f.gradient(up), gd = f.gradient(down);
    for (std::size_t i = 0; i < n; ++i) {
      double fd = (gu[i] - gd[i]) / (2 * h);
      EXPECT_NEAR(hess[i * n + j], fd, 1e-4 * (1 + std::abs(fd)));
    }
  }
}

TEST(JointProperty, EqualMarginalAtCoordinatedOptimum) {
  for (const JointProblem& p : property_instances()) {
    JointSolution s = solve_coordinated(p);
    ASSERT_TRUE(s.converged);
    std::vector<double> flow = path_link_aggregates(s.allocation, p.graph);
    for (const PathRates& pr : s.allocation) {
      std::vector<double> lens;
      for (std::size_t k = 0; k < pr.paths.size(); ++k) {
        if (pr.rates[k] > 1e-6 * pr.total()) {
          lens.push_back(first_derivative_length(p.graph, pr.paths[k], flow));
        }
      }
      ASSERT_FALSE(lens.empty());
      auto [lo, hi] = std::minmax_element(lens.begin(), lens.end());
      EXPECT_LE(*hi / *lo - 1, 1e-4) << "demand " << pr.demand_id;
    }
  }
}

TEST(JointProperty, RelaxationInequality) {
  for (JointProblem p : property_instances()) {
    JointSolution cm = solve_coordinated(p);
    p.mode = Coordination::kUncoordinated;
    JointSolution um = solve_uncoordinated(p);
    JointObjective f(p);
    std::vector<double> v;
    for (const PathRates& pr : um.allocation) {
      for (double x : pr.rates) v.push_back(x / p.utility_unit_bps);
    }
    double um_under_cm = f.value_as(v, Coordination::kCoordinated);
    EXPECT_GE(cm.objective, um_under_cm - 1e-9 * (1 + std::abs(um_under_cm)));
  }
}

TEST(JointProperty, SolutionsStayInterior) {
  for (JointProblem p : property_instances()) {
    for (Coordination mode : {Coordination::kCoordinated, Coordination::kUncoordinated}) {
      p.mode = mode;
      JointSolution s = solve_joint(p);
      std::vector<double> flow = path_link_aggregates(s.allocation, p.graph);
      for (LinkIndex l = 0; l < p.graph.num_links(); ++l) {
        EXPECT_LE(flow[l], 0.999999 * p.graph.link(l).capacity_bps);
      }
      for (const PathRates& pr : s.allocation) {
        for (double x : pr.rates) EXPECT_GE(x, 0.0);
      }
    }
  }
}

TEST(JointProperty, Deterministic) {
  JointProblem p = toy("square", 4);
  JointSolution a = solve_coordinated(p), b = solve_coordinated(p);
  for (std::size_t d = 0; d < a.allocation.size(); ++d) {
    EXPECT_EQ(a.allocation[d].rates, b.allocation[d].rates);
  }
  EXPECT_EQ(a.objective, b.objective);
}

}  // namespace
}  // namespace mpath
