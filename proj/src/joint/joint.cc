#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "mpath/cost.h"
#include "mpath/error.h"
#include "mpath/joint.h"

namespace mpath {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInterior = 0.999999;
constexpr double kArmijo = 1e-4;
constexpr double kStopTolerance = 1e-6;
constexpr int kMaxIterations = 100000;

using Vec = std::vector<double>;

double norm2(const Vec& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

JointObjective::JointObjective(const JointProblem& problem)
    : mode_(problem.mode), alpha_(problem.utility.alpha) {
  if (!(alpha_ >= 0) || !std::isfinite(alpha_)) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("alpha must be >= 0, got {}", alpha_));
  }
  if (!(problem.utility_unit_bps > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "utility unit must be positive");
  }
  if (problem.paths.size() != problem.demands.size()) {
    throw Error(ErrorCode::kInvalidDemand, "need one path set per demand");
  }
  const double unit = problem.utility_unit_bps;
  for (const Link& l : problem.graph.links()) {
    if (!(l.capacity_bps > 0)) {
      throw Error(ErrorCode::kNonPositiveCapacity, "link capacity must be positive");
    }
    capacity_.push_back(l.capacity_bps / unit);
  }
  const auto& w = problem.utility.weights;
  if (!w.empty() && w.size() != problem.demands.size()) {
    throw Error(ErrorCode::kInvalidConfig, "one weight per demand expected");
  }
  for (std::size_t d = 0; d < problem.demands.size(); ++d) {
    double wd = w.empty() ? 1.0 : w[d];
    if (!(wd > 0)) throw Error(ErrorCode::kInvalidConfig, "weights must be positive");
    weight_.push_back(wd);
    double p = problem.demands[d].peak_at(0);
    if (!(p > 0)) {
      throw Error(ErrorCode::kInvalidDemand,
                  fmt::format("demand {} is not active at t=0", problem.demands[d].id));
    }
    peak_.push_back(is_elastic(p) ? kInf : p / unit);
    if (problem.paths[d].empty()) {
      throw Error(ErrorCode::kNoPathExists,
                  fmt::format("demand {} has no paths", problem.demands[d].id));
    }
    for (const Path& p : problem.paths[d]) {
      validate_path(problem.graph, problem.demands[d], p);
      path_links_.push_back(p.links);
      owner_.push_back(d);
    }
  }
}

std::vector<double> JointObjective::link_flow(const Vec& v) const {
  Vec y(capacity_.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (LinkIndex l : path_links_[i]) y[l] += v[i];
  }
  return y;
}

double JointObjective::max_utilisation(const Vec& v) const {
  Vec y = link_flow(v);
  double m = 0;
  for (std::size_t l = 0; l < y.size(); ++l) m = std::max(m, y[l] / capacity_[l]);
  return m;
}

double JointObjective::utility_part(const Vec& v, Coordination mode) const {
  double u = 0;
  if (mode == Coordination::kCoordinated) {
    Vec phi(peak_.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) phi[owner_[i]] += v[i];
    for (std::size_t d = 0; d < phi.size(); ++d) {
      if (alpha_ > 0 && !(phi[d] > 0)) return -kInf;
      u += alpha_utility(phi[d], alpha_, weight_[d]);
    }
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (alpha_ > 0 && !(v[i] > 0)) return -kInf;
      u += alpha_utility(v[i], alpha_, weight_[owner_[i]]);
    }
  }
  return u;
}

double JointObjective::value_as(const Vec& v, Coordination mode) const {
  Vec y = link_flow(v);
  double cost = 0;
  for (std::size_t l = 0; l < y.size(); ++l) {
    if (y[l] >= capacity_[l]) return -kInf;
    cost += y[l] / (capacity_[l] - y[l]);
  }
  double u = utility_part(v, mode);
  return u - cost;
}

double JointObjective::value(const Vec& v) const { return value_as(v, mode_); }

Vec JointObjective::gradient(const Vec& v) const {
  Vec y = link_flow(v);
  Vec g(v.size(), 0.0);
  Vec phi(peak_.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) phi[owner_[i]] += v[i];
  for (std::size_t i = 0; i < v.size(); ++i) {
    double arg = mode_ == Coordination::kCoordinated ? phi[owner_[i]] : v[i];
    g[i] = alpha_utility_gradient(arg, alpha_, weight_[owner_[i]]);
    for (LinkIndex l : path_links_[i]) g[i] -= mm1_link_cost_derivative(y[l], capacity_[l]);
  }
  return g;
}

Vec JointObjective::hessian(const Vec& v) const {
  const std::size_t n = v.size();
  Vec y = link_flow(v);
  Vec h(n * n, 0.0);
  Vec phi(peak_.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) phi[owner_[i]] += v[i];
  std::vector<std::vector<std::size_t>> through(capacity_.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (LinkIndex l : path_links_[i]) through[l].push_back(i);
  }
  for (std::size_t l = 0; l < through.size(); ++l) {
    if (through[l].empty()) continue;
    double c2 = mm1_link_cost_second_derivative(y[l], capacity_[l]);
    for (std::size_t i : through[l]) {
      for (std::size_t j : through[l]) h[i * n + j] -= c2;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mode_ == Coordination::kCoordinated) {
      double u2 = alpha_utility_curvature(phi[owner_[i]], alpha_, weight_[owner_[i]]);
      for (std::size_t j = 0; j < n; ++j) {
        if (owner_[j] == owner_[i]) h[i * n + j] += u2;
      }
    } else {
      h[i * n + i] += alpha_utility_curvature(v[i], alpha_, weight_[owner_[i]]);
    }
  }
  return h;
}

namespace {

class Solver {
 public:
  Solver(const JointProblem& problem) : obj_(problem) {
    members_.resize(obj_.num_demands());
    for (std::size_t i = 0; i < obj_.size(); ++i) members_[obj_.owner()[i]].push_back(i);
  }

  JointSolution run(const JointProblem& problem);

 private:
  // Euclidean projection onto {v >= 0, sum over each demand <= peak} is
  // max(0, v - tau_d); shifts() returns tau per demand.
  Vec shifts(const Vec& v) const;
  Vec project(const Vec& v) const;
  Vec newton_direction(const Vec& v, const Vec& g, double eps) const;
  bool accept(const Vec& cand, double f, const Vec& g, const Vec& v, double slack,
              double* f_new) const;

  JointObjective obj_;
  std::vector<std::vector<std::size_t>> members_;
};

Vec Solver::shifts(const Vec& v) const {
  Vec tau(members_.size(), 0.0);
  for (std::size_t d = 0; d < members_.size(); ++d) {
    double p = obj_.peak()[d];
    if (std::isinf(p)) continue;
    double sum = 0;
    for (std::size_t i : members_[d]) sum += std::max(0.0, v[i]);
    if (sum <= p) continue;
    Vec vals;
    for (std::size_t i : members_[d]) vals.push_back(v[i]);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    double cum = 0;
    for (std::size_t k = 0; k < vals.size(); ++k) {
      cum += vals[k];
      double t = (cum - p) / static_cast<double>(k + 1);
      if (k + 1 == vals.size() || vals[k + 1] <= t) {
        tau[d] = t;
        break;
      }
    }
  }
  return tau;
}

Vec Solver::project(const Vec& v) const {
  Vec tau = shifts(v);
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - tau[obj_.owner()[i]]);
  return out;
}

Vec Solver::newton_direction(const Vec& v, const Vec& g, double eps) const {
  const std::size_t n = v.size();
  Vec h = obj_.hessian(v);
  // A demand at its peak prices its paths at tau_d, so a path at zero stays
  // there unless it beats that price.
  Vec probe(n);
  for (std::size_t i = 0; i < n; ++i) probe[i] = v[i] + g[i];
  Vec tau = shifts(probe);
  std::vector<bool> active(n, false);
  for (std::size_t i = 0; i < n; ++i) active[i] = v[i] <= eps && g[i] - tau[obj_.owner()[i]] < 0;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) free.push_back(i);
  }
  std::vector<bool> pinned(members_.size(), false);
  Vec dir(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i]) {
      dir[i] = (g[i] - tau[obj_.owner()[i]]) / std::max(-h[i * n + i], 1e-300);
    }
  }
  // Peaks become equality constraints on the free block once they bind.
  for (std::size_t pass = 0; pass <= members_.size(); ++pass) {
    std::vector<std::size_t> eq;
    for (std::size_t d = 0; d < members_.size(); ++d) {
      if (pinned[d]) eq.push_back(d);
    }
    const std::size_t m = free.size(), k = eq.size();
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + k, m + k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + k);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) kkt(a, b) = -h[free[a] * n + free[b]];
      rhs(a) = g[free[a]];
    }
    for (std::size_t e = 0; e < k; ++e) {
      for (std::size_t a = 0; a < m; ++a) {
        if (obj_.owner()[free[a]] == eq[e]) {
          kkt(a, m + e) = 1.0;
          kkt(m + e, a) = 1.0;
        }
      }
    }
    Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    for (std::size_t a = 0; a < m; ++a) dir[free[a]] = sol(a);
    bool changed = false;
    for (std::size_t d = 0; d < members_.size(); ++d) {
      double p = obj_.peak()[d];
      if (pinned[d] || std::isinf(p)) continue;
      double sum = 0, step = 0;
      for (std::size_t i : members_[d]) {
        sum += v[i];
        if (!active[i]) step += dir[i];
      }
      if (p - sum <= eps && step > 0) {
        pinned[d] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dir;
}

bool Solver::accept(const Vec& cand, double f, const Vec& g, const Vec& v, double slack,
                    double* f_new) const {
  if (obj_.max_utilisation(cand) > kInterior) return false;
  double fc = obj_.value(cand);
  if (!std::isfinite(fc)) return false;
  double ascent = 0;
  for (std::size_t i = 0; i < v.size(); ++i) ascent += g[i] * (cand[i] - v[i]);
  if (fc < f + kArmijo * ascent - slack) return false;
  *f_new = fc;
  return true;
}

JointSolution Solver::run(const JointProblem& problem) {
  const std::size_t n = obj_.size();
  double min_cap = *std::min_element(obj_.capacity().begin(), obj_.capacity().end());
  std::size_t max_paths = 0;
  for (const auto& m : members_) max_paths = std::max(max_paths, m.size());
  const double eps0 = 1e-3 * min_cap / static_cast<double>(max_paths);
  Vec v(n, eps0);
  for (std::size_t d = 0; d < members_.size(); ++d) {
    double p = obj_.peak()[d];
    double share = std::min(eps0, p / (2.0 * static_cast<double>(members_[d].size())));
    for (std::size_t i : members_[d]) v[i] = share;
  }
  double f = obj_.value(v);
  if (!std::isfinite(f) || obj_.max_utilisation(v) > kInterior) {
    throw Error(ErrorCode::kNumericalFailure, "initial point is not interior");
  }

  JointSolution out;
  double residual = kInf;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    Vec g = obj_.gradient(v);
    Vec probe(n);
    for (std::size_t i = 0; i < n; ++i) probe[i] = v[i] + g[i];
    Vec pg = project(probe);
    for (std::size_t i = 0; i < n; ++i) pg[i] = v[i] - pg[i];
    residual = norm2(pg);
    if (residual <= kStopTolerance * (1.0 + std::abs(f))) {
      out.converged = true;
      break;
    }
    double eps = std::min(eps0, residual);
    // Near the optimum the predicted gain drops under the rounding noise
    // of f; tolerate that much.
    double slack = 1e-13 * (1.0 + std::abs(f));
    Vec dir = newton_direction(v, g, eps);
    double gd = 0;
    for (std::size_t i = 0; i < n; ++i) gd += g[i] * dir[i];
    bool moved = false;
    double f_new = f;
    if (gd > 0) {
      for (double t = 1.0; t > 1e-30; t *= 0.5) {
        Vec trial(n);
        for (std::size_t i = 0; i < n; ++i) trial[i] = v[i] + t * dir[i];
        Vec cand = project(trial);
        if (accept(cand, f, g, v, slack, &f_new)) {
          v = std::move(cand);
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      // Plain projected gradient, scaled by the largest curvature.
      Vec h = obj_.hessian(v);
      double scale = 0;
      for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, -h[i * n + i]);
      scale = scale > 0 ? 1.0 / scale : 1.0;
      for (double t = scale; t > 1e-30 * scale; t *= 0.5) {
        Vec trial(n);
        for (std::size_t i = 0; i < n; ++i) trial[i] = v[i] + t * g[i];
        Vec cand = project(trial);
        if (accept(cand, f, g, v, slack, &f_new)) {
          v = std::move(cand);
          moved = true;
          break;
        }
      }
    }
    if (!moved) break;
    f = f_new;
  }

  const double unit = problem.utility_unit_bps;
  out.iterations = it;
  out.objective = f;
  out.kkt_residual = residual / (1.0 + std::abs(f));
  std::size_t i = 0;
  for (std::size_t d = 0; d < problem.demands.size(); ++d) {
    PathRates pr;
    pr.demand_id = problem.demands[d].id;
    pr.paths = problem.paths[d];
    for (std::size_t k = 0; k < problem.paths[d].size(); ++k, ++i) pr.rates.push_back(v[i] * unit);
    out.totals.push_back(pr.total());
    out.allocation.push_back(std::move(pr));
  }
  out.gcr = goodput_to_cost_ratio(out.allocation);
  return out;
}

}  // namespace

JointSolution solve_joint(const JointProblem& problem) {
  Solver solver(problem);
  return solver.run(problem);
}

JointSolution solve_coordinated(const JointProblem& problem) {
  if (problem.mode != Coordination::kCoordinated) {
    throw Error(ErrorCode::kInvalidConfig, "problem is not in coordinated mode");
  }
  if (!(problem.utility.alpha > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "coordinated solve needs alpha > 0");
  }
  return solve_joint(problem);
}

JointSolution solve_uncoordinated(const JointProblem& problem) {
  if (problem.mode != Coordination::kUncoordinated) {
    throw Error(ErrorCode::kInvalidConfig, "problem is not in uncoordinated mode");
  }
  return solve_joint(problem);
}

}  // namespace mpath
