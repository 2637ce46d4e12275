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

#ifndef RLGAMES_KERNELS_HPP_
#define RLGAMES_KERNELS_HPP_

#include <cstddef>
#include <span>

#include "rlgames/game.hpp"

// Payoff contraction kernels. The serial version is the reference; the
// OpenMP version splits the profile range across threads and reduces
// per-thread partial payoff vectors.
namespace rlgames::kernels {

// Profile counts at or above this use the OpenMP kernel.
inline constexpr std::size_t kParallelProfileThreshold = 1 << 15;

void payoff_vector_serial(const Game& game, int k,
                          std::span<const double> flat_x,
                          std::span<double> out);

void payoff_vector_parallel(const Game& game, int k,
                            std::span<const double> flat_x,
                            std::span<double> out);

// All players' payoff vectors in one pass over the profiles, written to
// `out` with the same layout as `flat_x`.
void all_payoff_vectors_serial(const Game& game,
                               std::span<const double> flat_x,
                               std::span<double> out);

void all_payoff_vectors_parallel(const Game& game,
                                 std::span<const double> flat_x,
                                 std::span<double> out);

}  // namespace rlgames::kernels

#endif  // RLGAMES_KERNELS_HPP_
