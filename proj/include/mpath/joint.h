#pragma once

#include <string>
#include <vector>

#include "mpath/allocation.h"
#include "mpath/demand.h"
#include "mpath/graph.h"
#include "mpath/paths.h"

namespace mpath {

// alpha-fair utility. alpha == 1 is the log branch. Throws NonPositiveRate
// for rate <= 0 (rate == 0 is allowed when alpha == 0).
double alpha_utility(double rate, double alpha, double weight = 1.0);
double alpha_utility_gradient(double rate, double alpha, double weight = 1.0);
double alpha_utility_curvature(double rate, double alpha, double weight = 1.0);

struct UtilitySpec {
  double alpha = 2.0;
  std::vector<double> weights;  // empty: all 1
};

enum class Coordination { kCoordinated, kUncoordinated };

struct JointProblem {
  NetworkGraph graph;
  DemandSet demands;
  std::vector<PathSet> paths;  // per demand, same order
  UtilitySpec utility;
  Coordination mode = Coordination::kCoordinated;
  // Utility is evaluated on rate / utility_unit_bps. M/M/1 cost is
  // scale-free, so this only sets the utility/cost trade-off.
  double utility_unit_bps = 1e6;
};

struct JointSolution {
  PathAllocation allocation;  // bit/s
  std::vector<double> totals;
  double objective = 0;       // in the problem's own mode
  double gcr = 0;
  int iterations = 0;
  bool converged = false;
  double kkt_residual = 0;    // ||v - P(v + grad)|| / (1 + |objective|)
};

// Objective over the flat path-rate vector, in utility units. Exposed for
// gradient checks.
class JointObjective {
 public:
  explicit JointObjective(const JointProblem& problem);

  std::size_t size() const { return path_links_.size(); }
  // -inf outside the domain (a link at or past capacity, or a utility
  // argument that must be positive and is not).
  double value(const std::vector<double>& v) const;
  std::vector<double> gradient(const std::vector<double>& v) const;
  // Row-major dense Hessian.
  std::vector<double> hessian(const std::vector<double>& v) const;
  // Same value under the other coordination mode.
  double value_as(const std::vector<double>& v, Coordination mode) const;
  std::vector<double> link_flow(const std::vector<double>& v) const;
  // Largest aggregate / capacity over links.
  double max_utilisation(const std::vector<double>& v) const;

  const std::vector<double>& capacity() const { return capacity_; }
  const std::vector<double>& peak() const { return peak_; }
  const std::vector<std::size_t>& owner() const { return owner_; }
  std::size_t num_demands() const { return peak_.size(); }

 private:
  double utility_part(const std::vector<double>& v, Coordination mode) const;

  Coordination mode_;
  double alpha_;
  std::vector<double> weight_;
  std::vector<double> capacity_;                  // per link, utility units
  std::vector<double> peak_;                      // per demand, utility units
  std::vector<std::vector<LinkIndex>> path_links_;
  std::vector<std::size_t> owner_;                // path -> demand
};

// Projected Newton ascent (two-metric, Armijo on the projection arc) that
// only accepts iterates with every link below 0.999999 of capacity.
JointSolution solve_coordinated(const JointProblem& problem);
JointSolution solve_uncoordinated(const JointProblem& problem);
JointSolution solve_joint(const JointProblem& problem);

struct SweepPoint {
  double ratio = 1;
  JointSolution coordinated;
  JointSolution uncoordinated;
};

struct SweepSettings {
  std::string topology = "triangle";
  double base_capacity_bps = 10e6;
  double utility_unit_bps = 1e9;
  double alpha = 2.0;
  std::vector<double> ratios;
};

// Toy study: demands 1->2 and 3->2 over every simple path (3 hops at most).
SweepPoint solve_toy(const std::string& topology, double ratio, const SweepSettings& settings);
std::vector<SweepPoint> sweep_capacity_ratio(const SweepSettings& settings);

}  // namespace mpath
