// Copyright 2026 The rlgames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rlgames/simplex_lp.hpp"

#include <cmath>
#include <stdexcept>

namespace rlgames::lp {
namespace {

// Tableau with one row per constraint plus the objective row at the bottom.
// Column layout: structural variables, slack/surplus, artificials, rhs.
class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  double& at(int r, int c) { return a_[r * cols_ + c]; }
  double at(int r, int c) const { return a_[r * cols_ + c]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c < cols_; ++c) at(pr, c) /= p;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c < cols_; ++c) at(r, c) -= f * at(pr, c);
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> a_;
};

// Runs simplex iterations on the objective row `obj` (reduced costs stored
// negated, maximization). Columns >= `col_limit` never enter.
Status iterate(Tableau& t, std::vector<int>& basis, int obj, int col_limit,
               double tol, int& pivots_left) {
  const int m = static_cast<int>(basis.size());
  const int rhs = t.cols() - 1;
  while (true) {
    int enter = -1;
    for (int c = 0; c < col_limit; ++c) {
      if (t.at(obj, c) < -tol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return Status::kOptimal;
    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < m; ++r) {
      const double a = t.at(r, enter);
      if (a <= tol) continue;
      const double ratio = t.at(r, rhs) / a;
      if (leave < 0 || ratio < best - tol ||
          (std::abs(ratio - best) <= tol && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) return Status::kUnbounded;
    if (--pivots_left < 0) return Status::kIterationLimit;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
}

}  // namespace

Solution solve(const Problem& problem, double tolerance, int max_pivots) {
  const int n = problem.num_variables;
  const int m = static_cast<int>(problem.constraints.size());
  if (static_cast<int>(problem.objective.size()) != n) {
    throw std::invalid_argument("lp: objective size mismatch");
  }

  // Normalize to nonnegative right-hand sides.
  std::vector<Constraint> rows = problem.constraints;
  for (auto& row : rows) {
    if (static_cast<int>(row.coefficients.size()) != n) {
      throw std::invalid_argument("lp: constraint size mismatch");
    }
    if (row.rhs < 0) {
      for (double& a : row.coefficients) a = -a;
      row.rhs = -row.rhs;
      if (row.relation == Relation::kLessEqual) {
        row.relation = Relation::kGreaterEqual;
      } else if (row.relation == Relation::kGreaterEqual) {
        row.relation = Relation::kLessEqual;
      }
    }
  }

  int num_slack = 0;
  int num_art = 0;
  for (const auto& row : rows) {
    if (row.relation != Relation::kEqual) ++num_slack;
    if (row.relation != Relation::kLessEqual) ++num_art;
  }
  const int art_begin = n + num_slack;
  const int cols = art_begin + num_art + 1;
  const int rhs = cols - 1;
  const int phase1 = m;
  const int phase2 = m + 1;
  Tableau t(m + 2, cols);
  std::vector<int> basis(m);

  int slack = n;
  int art = art_begin;
  for (int r = 0; r < m; ++r) {
    const auto& row = rows[r];
    for (int c = 0; c < n; ++c) t.at(r, c) = row.coefficients[c];
    t.at(r, rhs) = row.rhs;
    if (row.relation == Relation::kLessEqual) {
      t.at(r, slack) = 1.0;
      basis[r] = slack++;
    } else {
      if (row.relation == Relation::kGreaterEqual) t.at(r, slack++) = -1.0;
      t.at(r, art) = 1.0;
      basis[r] = art++;
    }
  }
  for (int c = 0; c < n; ++c) t.at(phase2, c) = -problem.objective[c];

  // Phase 1: minimize the sum of artificials, i.e. maximize its negation.
  for (int r = 0; r < m; ++r) {
    if (basis[r] < art_begin) continue;
    for (int c = 0; c < cols; ++c) {
      if (c < art_begin || c == rhs) t.at(phase1, c) -= t.at(r, c);
    }
  }
  int pivots_left = max_pivots;
  Solution out;
  if (num_art > 0) {
    Status s = iterate(t, basis, phase1, art_begin, tolerance, pivots_left);
    if (s == Status::kIterationLimit) {
      out.status = s;
      return out;
    }
    if (-t.at(phase1, rhs) > 1e3 * tolerance * (1.0 + m)) {
      out.status = Status::kInfeasible;
      return out;
    }
    // Drive remaining zero-level artificials out of the basis.
    for (int r = 0; r < m; ++r) {
      if (basis[r] < art_begin) continue;
      for (int c = 0; c < art_begin; ++c) {
        if (std::abs(t.at(r, c)) > tolerance) {
          t.pivot(r, c);
          basis[r] = c;
          break;
        }
      }
    }
  }

  Status s = iterate(t, basis, phase2, art_begin, tolerance, pivots_left);
  out.status = s;
  if (s != Status::kOptimal) return out;
  out.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) out.x[basis[r]] = t.at(r, rhs);
  }
  out.objective = 0.0;
  for (int c = 0; c < n; ++c) out.objective += problem.objective[c] * out.x[c];
  return out;
}

}  // namespace rlgames::lp
