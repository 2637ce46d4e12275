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
#include "rlgames/game.hpp"
#include "rlgames/kernels.hpp"

using namespace rlgames;

namespace {

Game random_game(const std::vector<int>& counts, std::mt19937_64& rng) {
  std::size_t profiles = 1;
  for (int n : counts) profiles *= n;
  std::vector<Vector> payoffs;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    payoffs.push_back(oracle::random_vector(rng, static_cast<int>(profiles), -1, 1));
  }
  return Game(counts, payoffs);
}

std::vector<double> random_flat(const std::vector<int>& counts, std::mt19937_64& rng) {
  std::vector<double> flat;
  for (int n : counts) {
    const auto x = oracle::random_interior(rng, n, 0.0);
    flat.insert(flat.end(), x.begin(), x.end());
  }
  return flat;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree with the oracle") {
  std::mt19937_64 rng(29);
  for (const auto& counts :
       std::vector<std::vector<int>>{{2, 2}, {3, 4, 2}, {2, 2, 2, 2, 2}, {5, 4, 3}}) {
    const Game g = random_game(counts, rng);
    const auto flat = random_flat(counts, rng);
    std::vector<double> s(g.total_actions()), p(g.total_actions());
    kernels::all_payoff_vectors_serial(g, flat, s);
    kernels::all_payoff_vectors_parallel(g, flat, p);
    int off = 0;
    for (int k = 0; k < g.num_players(); ++k) {
      const auto expect = oracle::payoff_vector(g, k, flat);
      std::vector<double> one_s(g.num_actions(k)), one_p(g.num_actions(k));
      kernels::payoff_vector_serial(g, k, flat, one_s);
      kernels::payoff_vector_parallel(g, k, flat, one_p);
      for (int a = 0; a < g.num_actions(k); ++a) {
        CHECK(s[off + a] == doctest::Approx(expect[a]).epsilon(1e-12));
        CHECK(p[off + a] == doctest::Approx(expect[a]).epsilon(1e-12));
        CHECK(one_s[a] == doctest::Approx(expect[a]).epsilon(1e-12));
        CHECK(one_p[a] == doctest::Approx(expect[a]).epsilon(1e-12));
      }
      off += g.num_actions(k);
    }
  }
}

TEST_CASE("parallel kernel is deterministic and handles boundary profiles") {
  std::mt19937_64 rng(31);
  const std::vector<int> counts = {8, 8, 8, 8, 8, 2};  // above the dispatch threshold
  const Game g = random_game(counts, rng);
  REQUIRE(g.num_profiles() >= kernels::kParallelProfileThreshold);
  auto flat = random_flat(counts, rng);
  flat[0] = 0.0;  // zero entries must not break the prefix/suffix products
  double s = 0.0;
  for (int a = 0; a < 8; ++a) s += flat[a];
  for (int a = 0; a < 8; ++a) flat[a] /= s;
  std::vector<double> a(g.total_actions()), b(g.total_actions()), c(g.total_actions());
  kernels::all_payoff_vectors_parallel(g, flat, a);
  kernels::all_payoff_vectors_parallel(g, flat, b);
  kernels::all_payoff_vectors_serial(g, flat, c);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i] == doctest::Approx(c[i]).epsilon(1e-12));
  }
  const auto expect = oracle::payoff_vector(g, 2, flat);
  for (int i = 0; i < 8; ++i) CHECK(c[16 + i] == doctest::Approx(expect[i]).epsilon(1e-12));
}
