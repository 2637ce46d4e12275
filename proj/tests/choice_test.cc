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

#include "oracles.hpp"
#include "rlgames/choice.hpp"

using namespace rlgames;

namespace {

std::vector<Penalty> all_kinds() {
  return {Penalty::gibbs(),      Penalty::quadratic(),  Penalty::tsallis(0.5),
          Penalty::tsallis(1.5), Penalty::tsallis(2.0), Penalty::tsallis(3.0),
          Penalty::renyi(0.3),   Penalty::renyi(0.7),   Penalty::log_barrier()};
}

std::function<double(double)> two_action_derivative(const Penalty& h) {
  switch (h.kind()) {
    case PenaltyKind::kGibbs: return oracle::dh_gibbs;
    case PenaltyKind::kQuadratic: return oracle::dh_quad;
    case PenaltyKind::kTsallis: return oracle::dh_tsallis(h.q());
    case PenaltyKind::kRenyi: return oracle::dh_renyi(h.q());
    case PenaltyKind::kLogBarrier: return oracle::dh_logbar;
  }
  return {};
}

double norm2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("closed-form examples") {
  const auto u = choice_map(Penalty::gibbs(), std::vector<double>{0, 0, 0});
  for (double v : u) CHECK(v == doctest::Approx(1.0 / 3));
  const auto p = choice_map(Penalty::quadratic(), std::vector<double>{0.4, 0.1, -0.3});
  CHECK(p[0] == doctest::Approx(0.65));
  CHECK(p[1] == doctest::Approx(0.35));
  CHECK(p[2] == 0.0);
  const auto l = choice_map(Penalty::gibbs(), std::vector<double>{1, 0});
  CHECK(l[0] == doctest::Approx(std::exp(1.0) / (1 + std::exp(1.0))));

  CHECK(conjugate_value(Penalty::gibbs(), std::vector<double>{0, 0}) ==
        doctest::Approx(std::log(2.0)));
  CHECK(conjugate_value(Penalty::quadratic(), std::vector<double>{2, 0}) ==
        doctest::Approx(1.5));

  const auto y0 = inverse_choice(Penalty::gibbs(), std::vector<double>{0.5, 0.5});
  CHECK(std::abs(y0[0]) < 1e-15);
  CHECK(std::abs(y0[1]) < 1e-15);
  const double e = std::exp(1.0);
  const auto y1 = inverse_choice(Penalty::gibbs(), std::vector<double>{e / (1 + e), 1 / (1 + e)});
  CHECK(y1[0] - y1[1] == doctest::Approx(1.0));
  const std::vector<double> x = {0.65, 0.35, 0.0};
  const auto back = choice_map(Penalty::quadratic(), inverse_choice(Penalty::quadratic(), x));
  CHECK(oracle::sup_diff(back, x) <= 1e-12);
  CHECK_THROWS_AS(inverse_choice(Penalty::gibbs(), x), std::domain_error);
}

TEST_CASE("two-action maps match the bisection oracle") {
  std::mt19937_64 rng(59);
  for (const auto& h : all_kinds()) {
    INFO(h.to_string());
    const auto dh = two_action_derivative(h);
    double worst = 0.0;
    for (int rep = 0; rep < 300; ++rep) {
      const auto y = oracle::random_vector(rng, 2, -5, 5);
      worst = std::max(worst, oracle::sup_diff(choice_map(h, y), oracle::choice_two(y, dh)));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("active-set solver agrees with logit and projection") {
  std::mt19937_64 rng(61);
  double worst_logit = 0.0, worst_proj = 0.0, worst_q2 = 0.0, worst_oracle = 0.0;
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 1000; ++rep) {
      const auto y = oracle::random_vector(rng, n, -5, 5);
      const auto g = choice_map_active_set(Penalty::gibbs(), y);
      const auto q = choice_map_active_set(Penalty::quadratic(), y);
      worst_logit = std::max(worst_logit, oracle::sup_diff(g, logit(y)));
      worst_proj = std::max(worst_proj, oracle::sup_diff(q, project_simplex(y)));
      worst_oracle = std::max(worst_oracle, oracle::sup_diff(logit(y), oracle::logit(y)));
      worst_oracle =
          std::max(worst_oracle, oracle::sup_diff(project_simplex(y), oracle::project_simplex(y)));
      worst_q2 = std::max(worst_q2, oracle::sup_diff(choice_map(Penalty::tsallis(2.0), y),
                                                     project_simplex(y)));
    }
  }
  CHECK(worst_logit <= 1e-8);
  CHECK(worst_proj <= 1e-8);
  CHECK(worst_oracle <= 1e-12);
  CHECK(worst_q2 <= 1e-10);
}

TEST_CASE("shift invariance and dead coordinates") {
  std::mt19937_64 rng(67);
  for (const auto& h : all_kinds()) {
    INFO(h.to_string());
    for (int rep = 0; rep < 50; ++rep) {
      auto y = oracle::random_vector(rng, 4, -3, 3);
      const auto x = choice_map(h, y);
      const double c = oracle::random_vector(rng, 1, -10, 10)[0];
      auto shifted = y;
      for (double& v : shifted) v += c;
      CHECK(oracle::sup_diff(choice_map(h, shifted), x) <= 1e-10);
      CHECK(conjugate_value(h, shifted) == doctest::Approx(conjugate_value(h, y) + c));
      for (int b = 0; b < 4; ++b) {
        if (x[b] != 0.0) continue;
        for (double t : {0.5, 5.0, 50.0}) {
          auto lowered = y;
          lowered[b] -= t;
          CHECK(oracle::sup_diff(choice_map(h, lowered), x) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("vanishing shares") {
  const std::vector<double> y = {0, 40};
  CHECK(choice_map(Penalty::gibbs(), y)[0] <= 1e-12);
  CHECK(choice_map(Penalty::quadratic(), y)[0] == 0.0);
  CHECK(choice_map(Penalty::quadratic(), std::vector<double>{0, 1.0 + 1e-9})[0] == 0.0);
  for (const auto& h : all_kinds()) {
    double prev = 1.0;
    for (double gap : {1.0, 5.0, 20.0, 80.0}) {
      const double x = choice_map(h, std::vector<double>{-gap, 0, 0.5})[0];
      CHECK(x <= prev + 1e-15);
      prev = x;
    }
    CHECK(prev <= 0.05);
  }
}

TEST_CASE("gradient of the conjugate is the choice map") {
  std::mt19937_64 rng(71);
  for (const auto& h : all_kinds()) {
    INFO(h.to_string());
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const auto y = oracle::random_vector(rng, 3, -2, 2);
      const auto fd = oracle::gradient(
          [&](const oracle::Vec& z) { return conjugate_value(h, z); }, y, 1e-5);
      const auto x = choice_map(h, y);
      const double scale = *std::max_element(x.begin(), x.end());
      worst = std::max(worst, oracle::sup_diff(fd, x) / scale);
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("choice maps are 1/K Lipschitz") {
  std::mt19937_64 rng(73);
  for (const auto& h : all_kinds()) {
    INFO(h.to_string());
    const double K = h.convexity_constant(3);
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
      const auto a = oracle::random_vector(rng, 3, -4, 4);
      const auto b = oracle::random_vector(rng, 3, -4, 4);
      const double lhs = norm2(choice_map(h, a), choice_map(h, b));
      worst = std::max(worst, lhs - norm2(a, b) / K);
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("inverse choice round trip and canonical gauge") {
  std::mt19937_64 rng(79);
  for (const auto& h : all_kinds()) {
    INFO(h.to_string());
    for (int rep = 0; rep < 100; ++rep) {
      const auto x = oracle::random_interior(rng, 4, 1e-3);
      const auto y = inverse_choice(h, x);
      CHECK(oracle::sup_diff(choice_map(h, y), x) <= 1e-10);
      double s = 0.0;
      for (double v : y) s += v;
      CHECK(std::abs(s) <= 1e-9);
    }
  }
  // Nonsteep penalties invert boundary points too.
  const std::vector<double> edge = {0.0, 0.25, 0.75};
  for (const auto& h : {Penalty::quadratic(), Penalty::tsallis(1.5), Penalty::tsallis(3.0)}) {
    CHECK(oracle::sup_diff(choice_map(h, inverse_choice(h, edge)), edge) <= 1e-10);
  }
}

TEST_CASE("extreme scores stay on the simplex") {
  for (const auto& h : all_kinds()) {
    const auto x = choice_map(h, std::vector<double>{1e6, -1e6, 3.0});
    double s = 0.0;
    for (double v : x) {
      CHECK(v >= 0.0);
      s += v;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x[0] > 0.999);
  }
  CHECK_THROWS_AS(choice_map(Penalty::gibbs(), std::vector<double>{NAN, 0}),
                  std::invalid_argument);
}

TEST_CASE("generic solver agrees with the Renyi reduction") {
  std::mt19937_64 rng(83);
  for (double q : {0.3, 0.7}) {
    const auto h = Penalty::renyi(q);
    double worst = 0.0;
    int solved = 0;
    for (int rep = 0; rep < 200; ++rep) {
      const auto y = oracle::random_vector(rng, 3, -1, 1);
      try {
        worst = std::max(worst, oracle::sup_diff(choice_map_active_set(h, y), choice_map(h, y)));
        ++solved;
      } catch (const SolverError&) {
      }
    }
    CHECK(solved == 200);
    CHECK(worst <= 1e-9);
  }
}
