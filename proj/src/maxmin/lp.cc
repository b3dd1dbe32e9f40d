#include "mpath/lp.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "mpath/error.h"

namespace mpath {

int LinearProgram::add_var(double lo, double hi, double obj) {
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

namespace {

// How an original variable maps onto non-negative tableau columns.
struct VarMap {
  enum Kind { kShift, kMirror, kFree } kind;
  int col;
  int col2;       // kFree only
  double offset;  // lo for kShift, hi for kMirror
};

struct Row {
  std::map<int, double> terms;
  double rhs;
  bool inequality;
};

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), a_((cols + 1) * static_cast<size_t>(rows), 0.0),
                                obj_(cols + 1, 0.0), basis_(rows, -1), blocked_(cols, 0) {}

  double& at(int r, int c) { return a_[static_cast<size_t>(r) * (n_ + 1) + c]; }
  double at(int r, int c) const { return a_[static_cast<size_t>(r) * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  std::vector<double>& obj() { return obj_; }
  std::vector<int>& basis() { return basis_; }
  std::vector<char>& blocked() { return blocked_; }
  int rows() const { return m_; }
  int cols() const { return n_; }

  void pivot(int r, int c) {
    const int w = n_ + 1;
    double* pr = &a_[static_cast<size_t>(r) * w];
    double inv = 1.0 / pr[c];
    nz_.clear();
    for (int j = 0; j < w; ++j) {
      if (pr[j] != 0.0) {
        pr[j] *= inv;
        nz_.push_back(j);
      }
    }
    pr[c] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* pi = &a_[static_cast<size_t>(i) * w];
      double f = pi[c];
      if (f == 0.0) continue;
      for (int j : nz_) pi[j] -= f * pr[j];
      pi[c] = 0.0;
    }
    double f = obj_[c];
    if (f != 0.0) {
      for (int j : nz_) obj_[j] -= f * pr[j];
      obj_[c] = 0.0;
    }
    basis_[r] = c;
  }

 private:
  int m_, n_;
  std::vector<double> a_;
  std::vector<double> obj_;
  std::vector<int> basis_;
  std::vector<char> blocked_;
  std::vector<int> nz_;
};

enum class Outcome { kOptimal, kUnbounded };

Outcome run_simplex(Tableau& t, const SimplexOptions& opt, int max_iter, int* iterations) {
  int degenerate = 0;
  bool bland = false;
  auto& obj = t.obj();
  const auto& blocked = t.blocked();
  while (true) {
    if (*iterations >= max_iter) {
      throw Error(ErrorCode::kNumericalFailure, "simplex iteration limit reached");
    }
    int enter = -1;
    double best = -opt.optimality_tolerance;
    for (int j = 0; j < t.cols(); ++j) {
      if (blocked[j] || obj[j] >= -opt.optimality_tolerance) continue;
      if (bland) {
        enter = j;
        break;
      }
      if (obj[j] < best) {
        best = obj[j];
        enter = j;
      }
    }
    if (enter < 0) return Outcome::kOptimal;

    int leave = -1;
    double best_ratio = 0, best_piv = 0;
    for (int i = 0; i < t.rows(); ++i) {
      double aij = t.at(i, enter);
      if (aij <= opt.pivot_tolerance) continue;
      double ratio = std::max(t.rhs(i), 0.0) / aij;
      if (leave < 0) {
        leave = i;
        best_ratio = ratio;
        best_piv = aij;
        continue;
      }
      double slack = 1e-12 * std::max(1.0, best_ratio);
      if (ratio < best_ratio - slack) {
        leave = i;
        best_ratio = ratio;
        best_piv = aij;
      } else if (ratio <= best_ratio + slack) {
        bool take = bland ? t.basis()[i] < t.basis()[leave] : aij > best_piv;
        if (take) {
          leave = i;
          best_ratio = std::min(ratio, best_ratio);
          best_piv = aij;
        }
      }
    }
    if (leave < 0) return Outcome::kUnbounded;

    if (best_ratio <= opt.feasibility_tolerance) {
      if (++degenerate > opt.degenerate_pivots_before_bland) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    t.pivot(leave, enter);
    ++*iterations;
  }
}

}  // namespace

LPSolution solve_linear_program(const LinearProgram& lp, const SimplexOptions& options) {
  const int nv = lp.num_vars();
  if (static_cast<int>(lp.lower.size()) != nv || static_cast<int>(lp.upper.size()) != nv) {
    throw Error(ErrorCode::kInvalidConfig, "LP bound vectors do not match the variable count");
  }

  // Variable substitution onto y >= 0.
  std::vector<VarMap> vmap(nv);
  std::vector<Row> rows;
  int ncols = 0;
  for (int j = 0; j < nv; ++j) {
    double lo = lp.lower[j], hi = lp.upper[j];
    if (lo > hi) {
      LPSolution infeasible;
      infeasible.status = LPStatus::kInfeasible;
      return infeasible;
    }
    if (std::isfinite(lo)) {
      vmap[j] = {VarMap::kShift, ncols++, -1, lo};
      if (std::isfinite(hi)) rows.push_back({{{vmap[j].col, 1.0}}, hi - lo, true});
    } else if (std::isfinite(hi)) {
      vmap[j] = {VarMap::kMirror, ncols++, -1, hi};
    } else {
      vmap[j] = {VarMap::kFree, ncols, ncols + 1, 0.0};
      ncols += 2;
    }
  }
  auto map_row = [&](const LinearConstraint& c, bool ineq) {
    Row r{{}, c.rhs, ineq};
    for (const LinearTerm& t : c.terms) {
      if (t.var < 0 || t.var >= nv) throw Error(ErrorCode::kInvalidConfig, "LP term out of range");
      const VarMap& v = vmap[t.var];
      switch (v.kind) {
        case VarMap::kShift:
          r.terms[v.col] += t.coef;
          r.rhs -= t.coef * v.offset;
          break;
        case VarMap::kMirror:
          r.terms[v.col] -= t.coef;
          r.rhs -= t.coef * v.offset;
          break;
        case VarMap::kFree:
          r.terms[v.col] += t.coef;
          r.terms[v.col2] -= t.coef;
          break;
      }
    }
    rows.push_back(std::move(r));
  };
  for (const auto& c : lp.equalities) map_row(c, false);
  for (const auto& c : lp.inequalities) map_row(c, true);

  const int m = static_cast<int>(rows.size());
  int nslack = 0, nart = 0;
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  std::vector<double> sign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    if (rows[i].rhs < 0) sign[i] = -1.0;
    if (rows[i].inequality) slack_col[i] = nslack++;
    if (!rows[i].inequality || sign[i] < 0) art_col[i] = nart++;
  }
  const int slack0 = ncols, art0 = ncols + nslack, total = ncols + nslack + nart;
  Tableau t(m, total);
  for (int i = 0; i < m; ++i) {
    for (const auto& [c, v] : rows[i].terms) t.at(i, c) = sign[i] * v;
    if (slack_col[i] >= 0) t.at(i, slack0 + slack_col[i]) = sign[i];
    t.rhs(i) = sign[i] * rows[i].rhs;
    if (art_col[i] >= 0) {
      t.at(i, art0 + art_col[i]) = 1.0;
      t.basis()[i] = art0 + art_col[i];
    } else {
      t.basis()[i] = slack0 + slack_col[i];
    }
  }

  double rhs_scale = 1.0;
  for (int i = 0; i < m; ++i) rhs_scale = std::max(rhs_scale, std::fabs(t.rhs(i)));
  const int max_iter =
      options.max_iterations > 0 ? options.max_iterations : 50 * (m + total) + 1000;
  LPSolution sol;

  // Phase 1: maximize -sum(artificials).
  if (nart > 0) {
    auto& obj = t.obj();
    std::fill(obj.begin(), obj.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      if (art_col[i] < 0) continue;
      for (int j = 0; j <= total; ++j) {
        if (j >= art0 && j < total) continue;
        obj[j] -= t.at(i, j);
      }
    }
    run_simplex(t, options, max_iter, &sol.iterations);
    if (t.obj()[total] < -options.feasibility_tolerance * rhs_scale * 10) {
      sol.status = LPStatus::kInfeasible;
      return sol;
    }
    // Drive remaining artificials out of the basis; rows that cannot be
    // cleared are redundant and stay with a zero artificial.
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] < art0) continue;
      int best = -1;
      double best_abs = options.pivot_tolerance;
      for (int j = 0; j < art0; ++j) {
        double v = std::fabs(t.at(i, j));
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      if (best >= 0) t.pivot(i, best);
    }
    for (int j = art0; j < total; ++j) t.blocked()[j] = 1;
  }

  // Phase 2.
  std::vector<double> cost(total, 0.0);
  for (int j = 0; j < nv; ++j) {
    const VarMap& v = vmap[j];
    double c = lp.objective[j];
    if (v.kind == VarMap::kShift) cost[v.col] = c;
    else if (v.kind == VarMap::kMirror) cost[v.col] = -c;
    else {
      cost[v.col] = c;
      cost[v.col2] = -c;
    }
  }
  {
    auto& obj = t.obj();
    for (int j = 0; j < total; ++j) obj[j] = -cost[j];
    obj[total] = 0.0;
    for (int i = 0; i < m; ++i) {
      double cb = cost[t.basis()[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= total; ++j) obj[j] += cb * t.at(i, j);
    }
  }
  if (run_simplex(t, options, max_iter, &sol.iterations) == Outcome::kUnbounded) {
    sol.status = LPStatus::kUnbounded;
    return sol;
  }

  std::vector<double> y(total, 0.0);
  for (int i = 0; i < m; ++i) y[t.basis()[i]] = std::max(t.rhs(i), 0.0);
  sol.values.resize(nv);
  for (int j = 0; j < nv; ++j) {
    const VarMap& v = vmap[j];
    switch (v.kind) {
      case VarMap::kShift: sol.values[j] = v.offset + y[v.col]; break;
      case VarMap::kMirror: sol.values[j] = v.offset - y[v.col]; break;
      case VarMap::kFree: sol.values[j] = y[v.col] - y[v.col2]; break;
    }
  }
  sol.objective = 0;
  for (int j = 0; j < nv; ++j) sol.objective += lp.objective[j] * sol.values[j];

  double worst = 0;
  auto activity = [&](const LinearConstraint& c) {
    double s = 0;
    for (const LinearTerm& term : c.terms) s += term.coef * sol.values[term.var];
    return s;
  };
  for (const auto& c : lp.equalities) {
    worst = std::max(worst, std::fabs(activity(c) - c.rhs) / std::max(1.0, std::fabs(c.rhs)));
  }
  for (const auto& c : lp.inequalities) {
    worst = std::max(worst, (activity(c) - c.rhs) / std::max(1.0, std::fabs(c.rhs)));
  }
  for (int j = 0; j < nv; ++j) {
    if (std::isfinite(lp.lower[j])) worst = std::max(worst, lp.lower[j] - sol.values[j]);
    if (std::isfinite(lp.upper[j])) worst = std::max(worst, sol.values[j] - lp.upper[j]);
  }
  sol.max_violation = worst;
  if (worst > 1e-7) {
    throw Error(ErrorCode::kNumericalFailure,
                fmt::format("simplex solution violates constraints by {}", worst));
  }
  sol.status = LPStatus::kOptimal;
  return sol;
}

const LPSolution& require_optimal(const LPSolution& solution) {
  if (solution.status == LPStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasible, "linear program is infeasible");
  }
  if (solution.status == LPStatus::kUnbounded) {
    throw Error(ErrorCode::kUnbounded, "linear program is unbounded");
  }
  return solution;
}

}  // namespace mpath
