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

#ifndef RLGAMES_CHOICE_HPP_
#define RLGAMES_CHOICE_HPP_

#include <span>
#include <stdexcept>
#include <string>

#include "rlgames/game.hpp"
#include "rlgames/penalty.hpp"

namespace rlgames {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Regularized best response: the maximizer of <y, x> - h(x) over the simplex.
Vector choice_map(const Penalty& h, std::span<const double> y);
// Allocation-free form; `out` has the size of `y`.
void choice_map(const Penalty& h, std::span<const double> y,
                std::span<double> out);

// Generic solver usable for every penalty: enumerates candidate supports,
// largest first, and solves each face's KKT system by damped Newton in
// log-coordinates. Throws SolverError if no candidate is KKT-feasible.
Vector choice_map_active_set(const Penalty& h, std::span<const double> y);

// Euclidean projection onto the simplex (sort-based).
void project_simplex(std::span<const double> y, std::span<double> out);
Vector project_simplex(std::span<const double> y);

// Softmax with the maximum subtracted before exponentiation.
void logit(std::span<const double> y, std::span<double> out);
Vector logit(std::span<const double> y);

// h*(y) = max_x <y, x> - h(x).
double conjugate_value(const Penalty& h, std::span<const double> y);

// A score vector whose choice is x: the face gradient on supp(x), shifted to
// sum to zero there, and (for nonsteep penalties) one unit below the cutoff
// elsewhere. Throws std::domain_error for boundary x under a steep penalty.
Vector inverse_choice(const Penalty& h, std::span<const double> x);

}  // namespace rlgames

#endif  // RLGAMES_CHOICE_HPP_
