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

#ifndef RLGAMES_COUPLING_HPP_
#define RLGAMES_COUPLING_HPP_

#include <span>
#include <vector>

#include "rlgames/extended_real.hpp"
#include "rlgames/game.hpp"
#include "rlgames/penalty.hpp"

namespace rlgames {

// Points whose support contains the support of a base point p.
class FaceSet {
 public:
  explicit FaceSet(std::span<const double> p);
  bool contains(std::span<const double> x) const;
  const std::vector<int>& base_support() const { return base_support_; }

 private:
  std::size_t dim_;
  std::vector<int> base_support_;
};

// One-sided derivative of h at x in the direction p - x. Exact zeros in x
// mark the boundary; -inf when a steep penalty is pushed off the boundary.
ExtendedReal directional_derivative(const Penalty& h, std::span<const double> x,
                                    std::span<const double> p);

// D(p, x) = h(p) - h(x) - h'(x; p - x). +inf when the derivative is -inf or
// when h(x) itself is infinite.
ExtendedReal bregman(const Penalty& h, std::span<const double> p,
                     std::span<const double> x);

// F(p, y) = h(p) + h*(y) - <y, p>. Finite and nonnegative up to rounding.
// Throws std::domain_error if h(p) is infinite.
double fenchel(const Penalty& h, std::span<const double> p,
               std::span<const double> y);

// Sum of per-player couplings.
double fenchel_profile(const std::vector<Penalty>& penalties,
                       const StrategyProfile& p, const FlatProfile& y);

}  // namespace rlgames

#endif  // RLGAMES_COUPLING_HPP_
