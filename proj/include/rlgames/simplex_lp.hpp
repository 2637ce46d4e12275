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

#ifndef RLGAMES_SIMPLEX_LP_HPP_
#define RLGAMES_SIMPLEX_LP_HPP_

#include <vector>

// Dense two-phase simplex method for small linear programs in the form
//
//   maximize c^T x  subject to  A x (<=|=|>=) b,  x >= 0.
//
// Bland's rule is used for pivoting, so degenerate problems terminate.
namespace rlgames::lp {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

struct Problem {
  int num_variables = 0;
  std::vector<double> objective;  // maximized
  std::vector<Constraint> constraints;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

Solution solve(const Problem& problem, double tolerance = 1e-11,
               int max_pivots = 100000);

}  // namespace rlgames::lp

#endif  // RLGAMES_SIMPLEX_LP_HPP_
