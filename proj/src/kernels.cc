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

#include "rlgames/kernels.hpp"

#include <algorithm>
#include <vector>

#include <omp.h>

namespace rlgames::kernels {
namespace {

// Accumulates into `out` (size n_k) the contribution of profiles
// [begin, end) to player k's payoff vector.
void accumulate_range(const Game& game, int k, std::span<const double> x,
                      std::size_t begin, std::size_t end, double* out) {
  const int players = game.num_players();
  std::vector<int> offsets(players);
  int acc = 0;
  for (int l = 0; l < players; ++l) {
    offsets[l] = acc;
    acc += game.num_actions(l);
  }
  std::vector<int> digit = game.decode_profile(begin);
  const auto u = game.payoffs(k);
  for (std::size_t idx = begin; idx < end; ++idx) {
    double w = 1.0;
    for (int l = 0; l < players; ++l) {
      if (l != k) w *= x[offsets[l] + digit[l]];
    }
    if (w != 0.0) out[digit[k]] += w * u[idx];
    for (int l = players - 1; l >= 0; --l) {
      if (++digit[l] < game.num_actions(l)) break;
      digit[l] = 0;
    }
  }
}

void accumulate_all_range(const Game& game, std::span<const double> x,
                          std::size_t begin, std::size_t end, double* out) {
  const int players = game.num_players();
  std::vector<int> offsets(players);
  int acc = 0;
  for (int l = 0; l < players; ++l) {
    offsets[l] = acc;
    acc += game.num_actions(l);
  }
  std::vector<int> digit = game.decode_profile(begin);
  std::vector<double> prefix(players + 1), suffix(players + 1);
  for (std::size_t idx = begin; idx < end; ++idx) {
    prefix[0] = 1.0;
    for (int l = 0; l < players; ++l) {
      prefix[l + 1] = prefix[l] * x[offsets[l] + digit[l]];
    }
    suffix[players] = 1.0;
    for (int l = players - 1; l >= 0; --l) {
      suffix[l] = suffix[l + 1] * x[offsets[l] + digit[l]];
    }
    for (int k = 0; k < players; ++k) {
      const double w = prefix[k] * suffix[k + 1];
      if (w != 0.0) out[offsets[k] + digit[k]] += w * game.payoff(k, idx);
    }
    for (int l = players - 1; l >= 0; --l) {
      if (++digit[l] < game.num_actions(l)) break;
      digit[l] = 0;
    }
  }
}

template <typename Accumulate>
void parallel_reduce(std::size_t profiles, std::span<double> out,
                     Accumulate&& accumulate) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t width = out.size();
#pragma omp parallel
  {
    const std::size_t threads = omp_get_num_threads();
    const std::size_t id = omp_get_thread_num();
    const std::size_t chunk = (profiles + threads - 1) / threads;
    const std::size_t begin = std::min(profiles, id * chunk);
    const std::size_t end = std::min(profiles, begin + chunk);
    std::vector<double> local(width, 0.0);
    if (begin < end) accumulate(begin, end, local.data());
    // Fixed thread order keeps the sum deterministic for a given team size.
#pragma omp for ordered schedule(static, 1)
    for (std::size_t t = 0; t < threads; ++t) {
#pragma omp ordered
      for (std::size_t i = 0; i < width; ++i) out[i] += local[i];
    }
  }
}

}  // namespace

void payoff_vector_serial(const Game& game, int k,
                          std::span<const double> flat_x,
                          std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  accumulate_range(game, k, flat_x, 0, game.num_profiles(), out.data());
}

void payoff_vector_parallel(const Game& game, int k,
                            std::span<const double> flat_x,
                            std::span<double> out) {
  parallel_reduce(game.num_profiles(), out,
                  [&](std::size_t b, std::size_t e, double* o) {
                    accumulate_range(game, k, flat_x, b, e, o);
                  });
}

void all_payoff_vectors_serial(const Game& game,
                               std::span<const double> flat_x,
                               std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  accumulate_all_range(game, flat_x, 0, game.num_profiles(), out.data());
}

void all_payoff_vectors_parallel(const Game& game,
                                 std::span<const double> flat_x,
                                 std::span<double> out) {
  parallel_reduce(game.num_profiles(), out,
                  [&](std::size_t b, std::size_t e, double* o) {
                    accumulate_all_range(game, flat_x, b, e, o);
                  });
}

}  // namespace rlgames::kernels
