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

#include "rlgames/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlgames/choice.hpp"

namespace rlgames {

FaceSet::FaceSet(std::span<const double> p)
    : dim_(p.size()), base_support_(support(p)) {}

bool FaceSet::contains(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("FaceSet: size mismatch");
  return std::all_of(base_support_.begin(), base_support_.end(),
                     [&](int a) { return x[a] > kSupportThreshold; });
}

ExtendedReal directional_derivative(const Penalty& h, std::span<const double> x,
                                    std::span<const double> p) {
  if (x.size() != p.size()) {
    throw std::invalid_argument("directional_derivative: size mismatch");
  }
  const std::size_t n = x.size();
  std::vector<int> face;
  bool leaves_face = false;
  for (std::size_t a = 0; a < n; ++a) {
    if (x[a] > 0) {
      face.push_back(static_cast<int>(a));
    } else if (p[a] > 0) {
      leaves_face = true;
    }
  }
  if (leaves_face && h.steep()) return ExtendedReal::neg_inf();

  if (!h.decomposable()) {
    const Vector g = h.face_gradient(x, face);
    double d = 0.0;
    for (std::size_t i = 0; i < face.size(); ++i) {
      d += g[i] * (p[face[i]] - x[face[i]]);
    }
    return d;
  }
  double d = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (x[a] > 0) {
      d += h.kernel_derivative(x[a]) * (p[a] - x[a]);
    } else if (p[a] > 0) {
      d += h.kernel_derivative_at_zero().value() * p[a];
    }
  }
  return d;
}

ExtendedReal bregman(const Penalty& h, std::span<const double> p,
                     std::span<const double> x) {
  const ExtendedReal hp = h.value(p);
  const ExtendedReal hx = h.value(x);
  if (!hx.finite()) return ExtendedReal::pos_inf();
  const ExtendedReal d = directional_derivative(h, x, p);
  if (d.is_neg_inf() || !hp.finite()) return ExtendedReal::pos_inf();
  return hp.value() - hx.value() - d.value();
}

double fenchel(const Penalty& h, std::span<const double> p,
               std::span<const double> y) {
  if (p.size() != y.size()) throw std::invalid_argument("fenchel: size mismatch");
  const ExtendedReal hp = h.value(p);
  if (!hp.finite()) {
    throw std::domain_error("fenchel: h(p) is infinite for " + h.to_string());
  }
  // Evaluated as h(p) - h(x) - <y - c, p - x> with x = Q(y), which avoids
  // the cancellation between h*(y) and <y, p> when scores are large.
  const Vector x = choice_map(h, y);
  const double c = *std::max_element(y.begin(), y.end());
  double pairing = 0.0;
  for (std::size_t a = 0; a < y.size(); ++a) pairing += (y[a] - c) * (p[a] - x[a]);
  return hp.value() - h.value_unchecked(x).value() - pairing;
}

double fenchel_profile(const std::vector<Penalty>& penalties,
                       const StrategyProfile& p, const FlatProfile& y) {
  if (p.counts() != y.counts() ||
      static_cast<int>(penalties.size()) != p.num_players()) {
    throw std::invalid_argument("fenchel_profile: dimension mismatch");
  }
  double total = 0.0;
  for (int k = 0; k < p.num_players(); ++k) total += fenchel(penalties[k], p[k], y[k]);
  return total;
}

}  // namespace rlgames
