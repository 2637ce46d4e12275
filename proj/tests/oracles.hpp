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

#ifndef RLGAMES_TESTS_ORACLES_HPP_
#define RLGAMES_TESTS_ORACLES_HPP_

// Independent reference computations for the tests. Everything here is
// written from first principles and avoids the library's algorithms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "rlgames/game.hpp"

namespace oracle {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Test helper; avoids the ambiguous braced StrategyProfile constructors.
inline rlgames::StrategyProfile profile(const std::vector<Vec>& xs) {
  return rlgames::StrategyProfile(xs);
}

// v_k(x) by enumerating every pure profile with nested index arithmetic.
inline Vec payoff_vector(const rlgames::Game& g, int k, std::span<const double> flat_x) {
  const int players = g.num_players();
  std::vector<int> offsets(players, 0);
  for (int l = 1; l < players; ++l) offsets[l] = offsets[l - 1] + g.num_actions(l - 1);
  Vec v(g.num_actions(k), 0.0);
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    std::size_t rest = idx;
    std::vector<int> prof(players);
    for (int l = players - 1; l >= 0; --l) {
      prof[l] = static_cast<int>(rest % g.num_actions(l));
      rest /= g.num_actions(l);
    }
    double w = 1.0;
    for (int l = 0; l < players; ++l) {
      if (l != k) w *= flat_x[offsets[l] + prof[l]];
    }
    v[prof[k]] += w * g.payoff(k, idx);
  }
  return v;
}

inline Vec logit(std::span<const double> y) {
  Vec x(y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (x[i] = std::exp(y[i]));
  for (double& v : x) v /= s;
  return x;
}

// Euclidean projection onto the simplex via bisection on the threshold.
inline Vec project_simplex(std::span<const double> y) {
  double lo = *std::min_element(y.begin(), y.end()) - 1.0;
  double hi = *std::max_element(y.begin(), y.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double v : y) s += std::max(0.0, v - mid);
    (s > 1.0 ? lo : hi) = mid;
  }
  Vec x(y.size());
  const double tau = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::max(0.0, y[i] - tau);
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& v : x) v /= s;
  return x;
}

// Two-action choice map: argmax of y1 s + y2 (1-s) - h(s, 1-s), found by
// bisection on the derivative `dh(s)` of s -> h(s, 1-s).
inline Vec choice_two(std::span<const double> y, const std::function<double(double)>& dh) {
  const double slope = y[0] - y[1];
  auto f = [&](double s) { return slope - dh(s); };  // decreasing in s
  double lo = 0.0, hi = 1.0;
  if (f(1.0 - 1e-300) >= 0 && std::isfinite(dh(1.0))) return {1.0, 0.0};
  if (f(0.0) <= 0 && std::isfinite(dh(0.0))) return {0.0, 1.0};
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  return {s, 1.0 - s};
}

// d/ds h(s, 1-s) for the kinds used in the tests.
inline double dh_gibbs(double s) {
  if (s <= 0) return -kInf;
  if (s >= 1) return kInf;
  return std::log(s) - std::log(1 - s);
}
inline double dh_quad(double s) { return s - (1 - s); }
inline std::function<double(double)> dh_tsallis(double q) {
  return [q](double s) {
    auto d = [q](double x) {
      if (x <= 0) return q > 1 ? 1.0 / (q * (1 - q)) : -kInf;
      return (1 - q * std::pow(x, q - 1)) / (q * (1 - q));
    };
    return d(s) - d(1 - s);
  };
}
inline double dh_logbar(double s) {
  if (s <= 0) return -kInf;
  if (s >= 1) return kInf;
  return -1 / s + 1 / (1 - s);
}
inline std::function<double(double)> dh_renyi(double q) {
  return [q](double s) {
    if (s <= 0) return -kInf;
    if (s >= 1) return kInf;
    const double a = std::pow(s, q), b = std::pow(1 - s, q);
    return q * (std::pow(s, q - 1) - std::pow(1 - s, q - 1)) / ((q - 1) * (a + b));
  };
}

// Central finite-difference gradient.
inline Vec gradient(const std::function<double(const Vec&)>& f, const Vec& at,
                    double eps) {
  Vec g(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) {
    Vec p = at, m = at;
    p[i] += eps;
    m[i] -= eps;
    g[i] = (f(p) - f(m)) / (2 * eps);
  }
  return g;
}

// Classical RK4 on a generic state, independent of the library integrator.
inline Vec rk4(const std::function<Vec(const Vec&)>& f, Vec y, double dt, long steps) {
  auto axpy = [](const Vec& a, double s, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  for (long i = 0; i < steps; ++i) {
    const Vec k1 = f(y);
    const Vec k2 = f(axpy(y, dt / 2, k1));
    const Vec k3 = f(axpy(y, dt / 2, k2));
    const Vec k4 = f(axpy(y, dt, k3));
    for (std::size_t j = 0; j < y.size(); ++j) {
      y[j] += dt / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
  }
  return y;
}

// Uniform sample from the open simplex (Dirichlet(1,...,1)), kept away from
// the boundary by `floor`.
inline Vec random_interior(std::mt19937_64& rng, int n, double floor = 1e-3) {
  std::exponential_distribution<double> e(1.0);
  Vec x(n);
  double s = 0.0;
  for (double& v : x) s += (v = e(rng) + floor);
  for (double& v : x) v /= s;
  return x;
}

inline Vec random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec y(n);
  for (double& v : y) v = u(rng);
  return y;
}

inline double sup_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace oracle

#endif  // RLGAMES_TESTS_ORACLES_HPP_
