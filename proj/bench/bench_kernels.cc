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

// Serial vs OpenMP payoff contraction on random games of growing size.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "rlgames/game.hpp"
#include "rlgames/kernels.hpp"

namespace {

using Clock = std::chrono::steady_clock;

rlgames::Game random_game(int players, int actions, std::mt19937_64& rng) {
  std::vector<int> counts(players, actions);
  std::size_t profiles = 1;
  for (int n : counts) profiles *= n;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<rlgames::Vector> payoffs(players, rlgames::Vector(profiles));
  for (auto& p : payoffs) {
    for (double& v : p) v = u(rng);
  }
  return rlgames::Game(counts, payoffs);
}

template <typename F>
double seconds_per_call(F&& f, int reps) {
  const auto start = Clock::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double>(Clock::now() - start).count() / reps;
}

}  // namespace

int main() {
  std::mt19937_64 rng(7);
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%8s %8s %12s %12s %12s %10s\n", "players", "actions", "profiles",
              "serial_s", "parallel_s", "max_diff");
  const int shapes[][2] = {{2, 64}, {3, 32}, {4, 16}, {5, 10}, {6, 8}};
  for (const auto& shape : shapes) {
    const rlgames::Game game = random_game(shape[0], shape[1], rng);
    const auto x = rlgames::StrategyProfile::uniform(game.action_counts());
    std::vector<double> a(game.total_actions()), b(game.total_actions());
    const int reps = game.num_profiles() > 100000 ? 3 : 20;
    const double ts = seconds_per_call(
        [&] { rlgames::kernels::all_payoff_vectors_serial(game, x.flat(), a); }, reps);
    const double tp = seconds_per_call(
        [&] { rlgames::kernels::all_payoff_vectors_parallel(game, x.flat(), b); }, reps);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    std::printf("%8d %8d %12zu %12.3e %12.3e %10.2e\n", shape[0], shape[1],
                game.num_profiles(), ts, tp, diff);
  }
  return 0;
}
