#include <cmath>
#include <limits>
#include <array>
#include <random>

#include <gtest/gtest.h>

#include "mpath/error.h"
#include "mpath/lp.h"

namespace mpath {
namespace {

TEST(LpTest, TwoUpperBoundsOnOneVariable) {
  LinearProgram lp;
  int z = lp.add_var(-kLpInfinity, kLpInfinity, 1.0);
  lp.inequalities.push_back({{{z, 1.0}}, 3});
  lp.inequalities.push_back({{{z, 1.0}}, 5});
  LPSolution s = solve_linear_program(lp);
  ASSERT_EQ(s.status, LPStatus::kOptimal);
  EXPECT_NEAR(s.values[z], 3.0, 1e-12);
}

TEST(LpTest, SumBound) {
  LinearProgram lp;
  int x = lp.add_var(0, kLpInfinity, 1.0);
  int y = lp.add_var(0, kLpInfinity, 1.0);
  lp.inequalities.push_back({{{x, 1.0}, {y, 1.0}}, 10});
  LPSolution s = solve_linear_program(lp);
  ASSERT_EQ(s.status, LPStatus::kOptimal);
  EXPECT_NEAR(s.objective, 10.0, 1e-12);
}

TEST(LpTest, InfeasibleAndUnbounded) {
  LinearProgram lp;
  int z = lp.add_var(0, kLpInfinity, 1.0);
  lp.inequalities.push_back({{{z, 1.0}}, -1});
  EXPECT_EQ(solve_linear_program(lp).status, LPStatus::kInfeasible);
  try {
    require_optimal(solve_linear_program(lp));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
  LinearProgram open;
  open.add_var(0, kLpInfinity, 1.0);
  EXPECT_EQ(solve_linear_program(open).status, LPStatus::kUnbounded);
}

TEST(LpTest, EqualitiesAndFreeVariables) {
  // max x - y, x + y == 4, x - y <= 2, y free.
  LinearProgram lp;
  int x = lp.add_var(0, kLpInfinity, 1.0);
  int y = lp.add_var(-kLpInfinity, kLpInfinity, -1.0);
  lp.equalities.push_back({{{x, 1}, {y, 1}}, 4});
  lp.inequalities.push_back({{{x, 1}, {y, -1}}, 2});
  LPSolution s = solve_linear_program(lp);
  ASSERT_EQ(s.status, LPStatus::kOptimal);
  EXPECT_NEAR(s.objective, 2.0, 1e-12);
  EXPECT_NEAR(s.values[x] + s.values[y], 4.0, 1e-12);
}

TEST(LpTest, DegenerateCyclingExample) {
  // Beale's example (cycles under textbook Dantzig without protection).
  LinearProgram lp;
  int x1 = lp.add_var(0, kLpInfinity, 0.75);
  int x2 = lp.add_var(0, kLpInfinity, -150);
  int x3 = lp.add_var(0, kLpInfinity, 1.0 / 50);
  int x4 = lp.add_var(0, kLpInfinity, -6);
  lp.inequalities.push_back({{{x1, 0.25}, {x2, -60}, {x3, -1.0 / 25}, {x4, 9}}, 0});
  lp.inequalities.push_back({{{x1, 0.5}, {x2, -90}, {x3, -1.0 / 50}, {x4, 3}}, 0});
  lp.inequalities.push_back({{{x3, 1}}, 1});
  LPSolution s = solve_linear_program(lp);
  ASSERT_EQ(s.status, LPStatus::kOptimal);
  EXPECT_NEAR(s.objective, 0.05, 1e-12);
}

TEST(LpTest, Deterministic) {
  LinearProgram lp;
  for (int i = 0; i < 6; ++i) lp.add_var(0, 1 + i, 1.0 + 0.1 * i);
  lp.inequalities.push_back({{{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}, 7});
  LPSolution a = solve_linear_program(lp), b = solve_linear_program(lp);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.iterations, b.iterations);
}

// Two-variable LPs checked against vertex enumeration.
TEST(LpProperty, MatchesVertexEnumeration) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3, 3);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    LinearProgram lp;
    lp.add_var(0, 10, u(rng));
    lp.add_var(0, 10, u(rng));
    std::vector<std::array<double, 3>> rows;  // a x + b y <= c
    int m = 1 + trial % 4;
    for (int i = 0; i < m; ++i) {
      rows.push_back({u(rng), u(rng), std::abs(u(rng)) + 0.1});
      lp.inequalities.push_back({{{0, rows.back()[0]}, {1, rows.back()[1]}}, rows.back()[2]});
    }
    std::vector<std::array<double, 3>> all = rows;
    all.push_back({-1, 0, 0});
    all.push_back({0, -1, 0});
    all.push_back({1, 0, 10});
    all.push_back({0, 1, 10});
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        double det = all[i][0] * all[j][1] - all[i][1] * all[j][0];
        if (std::abs(det) < 1e-9) continue;
        double x = (all[i][2] * all[j][1] - all[i][1] * all[j][2]) / det;
        double y = (all[i][0] * all[j][2] - all[i][2] * all[j][0]) / det;
        bool ok = true;
        for (const auto& r : all) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
        if (ok) best = std::max(best, lp.objective[0] * x + lp.objective[1] * y);
      }
    }
    LPSolution s = solve_linear_program(lp);
    ASSERT_EQ(s.status, LPStatus::kOptimal);  // origin is always feasible
    EXPECT_NEAR(s.objective, best, 1e-8 * (1 + std::abs(best))) << "trial " << trial;
    ++checked;
  }
  EXPECT_EQ(checked, 300);
}

}  // namespace
}  // namespace mpath
