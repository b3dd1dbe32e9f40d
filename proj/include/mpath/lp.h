#pragma once

#include <limits>
#include <vector>

namespace mpath {

inline constexpr double kLpInfinity = std::numeric_limits<double>::infinity();

struct LinearTerm {
  int var;
  double coef;
};

struct LinearConstraint {
  std::vector<LinearTerm> terms;
  double rhs = 0;
};

// maximize objective.x  s.t.  equalities (a.x == rhs), inequalities
// (a.x <= rhs), lower <= x <= upper. Bounds may be infinite.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LinearConstraint> equalities;
  std::vector<LinearConstraint> inequalities;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int add_var(double lo = 0.0, double hi = kLpInfinity, double obj = 0.0);
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded };

struct LPSolution {
  LPStatus status = LPStatus::kInfeasible;
  double objective = 0;
  std::vector<double> values;
  int iterations = 0;
  double max_violation = 0;  // primal residual on the original rows/bounds
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  int degenerate_pivots_before_bland = 50;
  int max_iterations = 0;  // 0: 50 * (rows + columns)
};

// Dense two-phase primal simplex; Dantzig pricing, switching to Bland's rule
// on degenerate stalls. Deterministic. Throws NumericalFailure when the
// iteration limit is hit or the final point violates the rows by > 1e-7
// (relative to the row scale).
LPSolution solve_linear_program(const LinearProgram& lp, const SimplexOptions& options = {});

// Throws Infeasible / Unbounded for non-optimal statuses.
const LPSolution& require_optimal(const LPSolution& solution);

}  // namespace mpath
