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

#include "rlgames/choice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

namespace rlgames {
namespace {

constexpr double kMuTolerance = 1e-13;
constexpr int kNewtonIterations = 100;
constexpr double kKktTolerance = 1e-11;

void renormalize(std::span<double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  for (double& v : x) v /= sum;
}

// Decomposable penalties: sum_a phi(y_a - mu) = 1 is decreasing in mu.
void bisection_choice(const Penalty& h, std::span<const double> y,
                      std::span<double> out) {
  const int n = static_cast<int>(y.size());
  const double ymax = *std::max_element(y.begin(), y.end());
  double lo = ymax - h.kernel_derivative_at_one();
  double hi = ymax - h.kernel_derivative(1.0 / n);
  auto mass = [&](double mu) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += h.rate_function(y[a] - mu);
    return s;
  };
  while (hi - lo > kMuTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mass(mid) >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double mu = 0.5 * (lo + hi);
  for (int a = 0; a < n; ++a) out[a] = h.rate_function(y[a] - mu);
  double sum = 0.0;
  for (double v : out) sum += v;
  if (!(sum > 0)) {
    // Only possible when every coordinate is cut off; fall back to the top.
    const int top = static_cast<int>(std::max_element(y.begin(), y.end()) - y.begin());
    std::fill(out.begin(), out.end(), 0.0);
    out[top] = 1.0;
    return;
  }
  renormalize(out);
}

// Partial derivative of h at x_b = 0 along a face, as seen by the KKT
// conditions of coordinates outside the support.
ExtendedReal boundary_partial(const Penalty& h) {
  if (!h.decomposable()) return ExtendedReal::neg_inf();
  return h.kernel_derivative_at_zero();
}

// Renyi, q in (0, 1). Stationarity gives x_a proportional to w_a^p with
// w_a = mu - y_a > 0 and p = 1/(q-1), and mu solves
//   sum_a w_a^p ((1-q)/q w_a - 1) = 0.
// The sum is negative as mu -> max y and positive once every w_a exceeds
// q/(1-q). Terms are scaled by w_min^p so nothing overflows; bisection runs on
// log(w_min).
void renyi_choice(const Penalty& h, std::span<const double> y, std::span<double> out) {
  const double q = h.q();
  const double p = 1.0 / (q - 1.0);
  const double ymax = *std::max_element(y.begin(), y.end());
  auto weights = [&](double wmin, std::span<double> w) {
    for (std::size_t a = 0; a < y.size(); ++a) w[a] = (ymax - y[a]) + wmin;
  };
  std::vector<double> w(y.size());
  auto sign = [&](double log_wmin) {
    const double wmin = std::exp(log_wmin);
    weights(wmin, w);
    double g = 0.0;
    for (double wa : w) g += std::pow(wa / wmin, p) * ((1.0 - q) / q * wa - 1.0);
    return g;
  };
  double lo = std::log(1e-300);
  double hi = std::log(2.0 * q / (1.0 - q));
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (sign(mid) < 0 ? lo : hi) = mid;
  }
  const double wmin = std::exp(0.5 * (lo + hi));
  weights(wmin, w);
  for (std::size_t a = 0; a < y.size(); ++a) out[a] = std::pow(w[a] / wmin, p);
  renormalize(out);
}

struct FaceResult {
  bool converged = false;
  double residual = 0.0;
  double mu = 0.0;
  std::vector<double> x;  // on the face
};

// Solves grad_S h(x) - y_S + mu = 0, sum x_S = 1 in u = log x.
FaceResult solve_face(const Penalty& h, std::span<const double> y,
                      const std::vector<int>& face, int n) {
  const int m = static_cast<int>(face.size());
  FaceResult r;
  std::vector<double> full(n, 0.0);
  Eigen::VectorXd u = Eigen::VectorXd::Constant(m, -std::log(m));
  std::vector<double> ys(m);
  for (int i = 0; i < m; ++i) ys[i] = y[face[i]];
  double scale = 1.0;
  for (double v : ys) scale = std::max(scale, std::abs(v));

  auto load = [&](const Eigen::VectorXd& uu) {
    std::fill(full.begin(), full.end(), 0.0);
    for (int i = 0; i < m; ++i) full[face[i]] = std::exp(uu[i]);
  };
  auto residual = [&](const Eigen::VectorXd& uu, double mu,
                      Eigen::VectorXd& f) {
    load(uu);
    const Vector g = h.face_gradient(full, face);
    f.resize(m + 1);
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      f[i] = g[i] - ys[i] + mu;
      sum += full[face[i]];
    }
    f[m] = sum - 1.0;
    return f.lpNorm<Eigen::Infinity>();
  };

  load(u);
  double mu = 0.0;
  {
    const Vector g = h.face_gradient(full, face);
    for (int i = 0; i < m; ++i) mu += ys[i] - g[i];
    mu /= m;
  }
  Eigen::VectorXd f;
  double res = residual(u, mu, f);
  for (int it = 0; it < kNewtonIterations && res > kKktTolerance * scale; ++it) {
    load(u);
    const Eigen::MatrixXd hess = h.face_hessian(full, face);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int j = 0; j < m; ++j) {
      const double xj = full[face[j]];
      for (int i = 0; i < m; ++i) jac(i, j) = hess(i, j) * xj;
      jac(m, j) = xj;
      jac(j, m) = 1.0;
    }
    const Eigen::VectorXd step = jac.fullPivLu().solve(-f);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      Eigen::VectorXd u_new = u + t * step.head(m);
      const double mu_new = mu + t * step[m];
      if (u_new.maxCoeff() > 1.0 || u_new.minCoeff() < -700.0) continue;
      Eigen::VectorXd f_new;
      double res_new;
      try {
        res_new = residual(u_new, mu_new, f_new);
      } catch (const std::domain_error&) {
        continue;
      }
      if (std::isfinite(res_new) && res_new < res) {
        u = u_new;
        mu = mu_new;
        f = f_new;
        res = res_new;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  r.converged = res <= kKktTolerance * scale;
  r.residual = res;
  r.mu = mu;
  r.x.resize(m);
  for (int i = 0; i < m; ++i) r.x[i] = std::exp(u[i]);
  return r;
}

}  // namespace

void logit(std::span<const double> y, std::span<double> out) {
  const double ymax = *std::max_element(y.begin(), y.end());
  double sum = 0.0;
  for (std::size_t a = 0; a < y.size(); ++a) sum += (out[a] = std::exp(y[a] - ymax));
  for (double& v : out) v /= sum;
}

Vector logit(std::span<const double> y) {
  Vector x(y.size());
  logit(y, x);
  return x;
}

void project_simplex(std::span<const double> y, std::span<double> out) {
  const std::size_t n = y.size();
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0) tau = candidate;
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) sum += (out[a] = std::max(y[a] - tau, 0.0));
  for (double& v : out) v /= sum;
}

Vector project_simplex(std::span<const double> y) {
  Vector x(y.size());
  project_simplex(y, x);
  return x;
}

void choice_map(const Penalty& h, std::span<const double> y,
                std::span<double> out) {
  if (y.empty() || out.size() != y.size()) {
    throw std::invalid_argument("choice_map: size mismatch");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("choice_map: non-finite score");
  }
  switch (h.kind()) {
    case PenaltyKind::kGibbs: logit(y, out); return;
    case PenaltyKind::kQuadratic: project_simplex(y, out); return;
    case PenaltyKind::kTsallis:
    case PenaltyKind::kLogBarrier: bisection_choice(h, y, out); return;
    case PenaltyKind::kRenyi: renyi_choice(h, y, out); return;
  }
}

Vector choice_map(const Penalty& h, std::span<const double> y) {
  Vector x(y.size());
  choice_map(h, y, x);
  return x;
}

Vector choice_map_active_set(const Penalty& h, std::span<const double> y) {
  const int n = static_cast<int>(y.size());
  if (n == 0) throw std::invalid_argument("choice_map: empty score vector");
  if (n == 1) return {1.0};
  const ExtendedReal cutoff = boundary_partial(h);

  // Candidate supports: all nonempty subsets (only the full set when steep),
  // by size descending, then by total score descending.
  std::vector<std::vector<int>> faces;
  if (!cutoff.finite()) {
    faces.emplace_back(n);
    std::iota(faces.back().begin(), faces.back().end(), 0);
  } else {
    for (unsigned mask = (1u << n) - 1; mask > 0; --mask) {
      std::vector<int> f;
      for (int a = 0; a < n; ++a) {
        if (mask & (1u << a)) f.push_back(a);
      }
      faces.push_back(std::move(f));
    }
    auto score = [&](const std::vector<int>& f) {
      double s = 0.0;
      for (int a : f) s += y[a];
      return s;
    };
    std::stable_sort(faces.begin(), faces.end(), [&](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() > b.size();
      return score(a) > score(b);
    });
  }

  double scale = 1.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  double best_residual = std::numeric_limits<double>::infinity();
  for (const auto& face : faces) {
    FaceResult r = solve_face(h, y, face, n);
    best_residual = std::min(best_residual, r.residual);
    if (!r.converged) continue;
    if (*std::min_element(r.x.begin(), r.x.end()) <= 0) continue;
    bool feasible = true;
    if (cutoff.finite()) {
      std::vector<bool> in_face(n, false);
      for (int a : face) in_face[a] = true;
      for (int b = 0; b < n && feasible; ++b) {
        if (!in_face[b] && y[b] - r.mu > cutoff.value() + 1e-10 * scale) {
          feasible = false;
        }
      }
    }
    if (!feasible) continue;
    Vector x(n, 0.0);
    for (std::size_t i = 0; i < face.size(); ++i) x[face[i]] = r.x[i];
    renormalize(x);
    return x;
  }
  throw SolverError("choice_map: no KKT-feasible support found", best_residual);
}

double conjugate_value(const Penalty& h, std::span<const double> y) {
  if (h.kind() == PenaltyKind::kGibbs) {
    const double ymax = *std::max_element(y.begin(), y.end());
    double s = 0.0;
    for (double v : y) s += std::exp(v - ymax);
    return ymax + std::log(s);
  }
  const Vector x = choice_map(h, y);
  double dot = 0.0;
  for (std::size_t a = 0; a < y.size(); ++a) dot += y[a] * x[a];
  return dot - h.value_unchecked(x).value();
}

Vector inverse_choice(const Penalty& h, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < 0) {
      throw std::invalid_argument("inverse_choice: negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("inverse_choice: point is off the simplex");
  }
  std::vector<int> face;
  for (int a = 0; a < n; ++a) {
    if (x[a] > 0) face.push_back(a);
  }
  if (h.steep() && static_cast<int>(face.size()) < n) {
    throw std::domain_error("inverse_choice: boundary point for a steep penalty " +
                            h.to_string());
  }
  const Vector g = h.face_gradient(x, face);
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / g.size();
  Vector y(n, 0.0);
  if (static_cast<int>(face.size()) < n) {
    const double off = h.kernel_derivative_at_zero().value() - mean - 1.0;
    std::fill(y.begin(), y.end(), off);
  }
  for (std::size_t i = 0; i < face.size(); ++i) y[face[i]] = g[i] - mean;
  return y;
}

}  // namespace rlgames
