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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rlgames/simplex_lp.hpp"

using namespace rlgames::lp;

TEST_CASE("textbook maximization") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36.
  Problem p{2, {3, 5},
            {{{1, 0}, Relation::kLessEqual, 4},
             {{0, 2}, Relation::kLessEqual, 12},
             {{3, 2}, Relation::kLessEqual, 18}}};
  const Solution s = solve(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(36));
  CHECK(s.x[0] == doctest::Approx(2));
  CHECK(s.x[1] == doctest::Approx(6));
}

TEST_CASE("equality and >= constraints need phase one") {
  // max x + y s.t. x + y = 1, x >= 0.3 -> objective 1 with x >= 0.3.
  Problem p{2, {1, 1},
            {{{1, 1}, Relation::kEqual, 1}, {{1, 0}, Relation::kGreaterEqual, 0.3}}};
  const Solution s = solve(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(1));
  CHECK(s.x[0] >= 0.3 - 1e-12);
  // Negative right-hand side is normalized.
  Problem q{1, {-1}, {{{-1}, Relation::kLessEqual, -2}}};
  const Solution t = solve(q);
  REQUIRE(t.status == Status::kOptimal);
  CHECK(t.x[0] == doctest::Approx(2));
}

TEST_CASE("infeasible and unbounded problems") {
  Problem inf{1, {1}, {{{1}, Relation::kLessEqual, 1}, {{1}, Relation::kGreaterEqual, 2}}};
  CHECK(solve(inf).status == Status::kInfeasible);
  Problem unb{2, {1, 0}, {{{0, 1}, Relation::kLessEqual, 1}}};
  CHECK(solve(unb).status == Status::kUnbounded);
}

TEST_CASE("degenerate problem terminates") {
  // Classic cycling example for the largest-coefficient rule.
  Problem p{4, {0.75, -150, 0.02, -6},
            {{{0.25, -60, -0.04, 9}, Relation::kLessEqual, 0},
             {{0.5, -90, -0.02, 3}, Relation::kLessEqual, 0},
             {{0, 0, 1, 0}, Relation::kLessEqual, 1}}};
  const Solution s = solve(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(0.05));
}

TEST_CASE("random feasible problems: solution satisfies constraints and beats samples") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 3, m = 4;
    Problem p{n, {}, {}};
    for (int j = 0; j < n; ++j) p.objective.push_back(u(rng));
    for (int i = 0; i < m; ++i) {
      Constraint c{{}, Relation::kLessEqual, u(rng)};
      for (int j = 0; j < n; ++j) c.coefficients.push_back(u(rng));
      p.constraints.push_back(c);
    }
    const Solution s = solve(p);
    REQUIRE(s.status == Status::kOptimal);
    for (const auto& c : p.constraints) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += c.coefficients[j] * s.x[j];
      CHECK(lhs <= c.rhs + 1e-9);
    }
    // Random feasible points never do better.
    std::uniform_real_distribution<double> w(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(n);
      for (double& v : x) v = w(rng);
      double worst = 0.0;
      for (const auto& c : p.constraints) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) lhs += c.coefficients[j] * x[j];
        worst = std::max(worst, lhs / c.rhs);
      }
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += p.objective[j] * x[j] / std::max(1.0, worst);
      CHECK(obj <= s.objective + 1e-9);
    }
  }
}
