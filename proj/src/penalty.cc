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

#include "rlgames/penalty.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace rlgames {
namespace {

constexpr double kSimplexTol = 1e-9;

void check_simplex(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("penalty: empty vector");
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < 0) {
      throw std::invalid_argument("penalty: negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw std::invalid_argument("penalty: point is off the simplex (sum " +
                                std::to_string(sum) + ")");
  }
}

double parse_number(const std::string& text, const std::string& spec) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("penalty: bad parameter in '" + spec + "'");
  }
}

// Shortest text that reads back to the same double.
std::string format_q(double q) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, q);
  return std::string(buf, r.ptr);
}

}  // namespace

Penalty Penalty::gibbs() { return Penalty(PenaltyKind::kGibbs, 1.0); }
Penalty Penalty::quadratic() { return Penalty(PenaltyKind::kQuadratic, 2.0); }
Penalty Penalty::log_barrier() { return Penalty(PenaltyKind::kLogBarrier, 0.0); }

Penalty Penalty::tsallis(double q) {
  if (!(q > 0) || !std::isfinite(q)) {
    throw std::invalid_argument("tsallis: q must be positive");
  }
  if (std::abs(q - 1.0) < 1e-8) return gibbs();
  return Penalty(PenaltyKind::kTsallis, q);
}

Penalty Penalty::renyi(double q) {
  if (!(q > 0 && q < 1)) {
    throw std::invalid_argument("renyi: q must lie in (0, 1)");
  }
  return Penalty(PenaltyKind::kRenyi, q);
}

Penalty Penalty::parse(const std::string& text) {
  if (text == "gibbs") return gibbs();
  if (text == "quad") return quadratic();
  if (text == "logbar") return log_barrier();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    const double q = parse_number(text.substr(colon + 1), text);
    if (head == "tsallis") return tsallis(q);
    if (head == "renyi") return renyi(q);
  }
  throw std::invalid_argument(
      "unknown penalty '" + text +
      "' (expected gibbs | quad | tsallis:<q> | renyi:<q> | logbar)");
}

std::string Penalty::to_string() const {
  switch (kind_) {
    case PenaltyKind::kGibbs: return "gibbs";
    case PenaltyKind::kQuadratic: return "quad";
    case PenaltyKind::kTsallis: return "tsallis:" + format_q(q_);
    case PenaltyKind::kRenyi: return "renyi:" + format_q(q_);
    case PenaltyKind::kLogBarrier: return "logbar";
  }
  return "?";
}

bool Penalty::steep() const {
  switch (kind_) {
    case PenaltyKind::kQuadratic: return false;
    case PenaltyKind::kTsallis: return q_ <= 1.0;
    default: return true;
  }
}

void Penalty::require_decomposable(const char* what) const {
  if (!decomposable()) {
    throw UnsupportedOperation(std::string(what) + " is undefined for " +
                               to_string());
  }
}

ExtendedReal Penalty::value(std::span<const double> x) const {
  check_simplex(x);
  return value_unchecked(x);
}

ExtendedReal Penalty::value_unchecked(std::span<const double> x) const {
  if (kind_ == PenaltyKind::kRenyi) {
    double s = 0.0;
    for (double v : x) {
      if (v > 0) s += std::pow(v, q_);
    }
    return -std::log(s) / (1.0 - q_);
  }
  if (kind_ == PenaltyKind::kLogBarrier) {
    for (double v : x) {
      if (v <= 0) return ExtendedReal::pos_inf();
    }
  }
  double h = 0.0;
  for (double v : x) h += kernel(v);
  return h;
}

double Penalty::kernel(double x) const {
  require_decomposable("kernel");
  switch (kind_) {
    case PenaltyKind::kGibbs: return x > 0 ? x * std::log(x) : 0.0;
    case PenaltyKind::kQuadratic: return 0.5 * x * x;
    case PenaltyKind::kTsallis:
      return (x - std::pow(x, q_)) / (q_ * (1.0 - q_));
    case PenaltyKind::kLogBarrier:
      if (x <= 0) throw std::domain_error("log barrier kernel at 0");
      return -std::log(x);
    default: break;
  }
  return 0.0;
}

double Penalty::kernel_derivative(double x) const {
  require_decomposable("kernel_derivative");
  if (x <= 0 && steep()) {
    throw std::domain_error("kernel derivative of a steep penalty at 0");
  }
  switch (kind_) {
    case PenaltyKind::kGibbs: return 1.0 + std::log(x);
    case PenaltyKind::kQuadratic: return x;
    case PenaltyKind::kTsallis:
      if (x <= 0) return 1.0 / (q_ * (1.0 - q_));
      return (1.0 - q_ * std::pow(x, q_ - 1.0)) / (q_ * (1.0 - q_));
    case PenaltyKind::kLogBarrier: return -1.0 / x;
    default: break;
  }
  return 0.0;
}

double Penalty::kernel_second_derivative(double x) const {
  require_decomposable("kernel_second_derivative");
  switch (kind_) {
    case PenaltyKind::kGibbs: return 1.0 / x;
    case PenaltyKind::kQuadratic: return 1.0;
    case PenaltyKind::kTsallis: return std::pow(x, q_ - 2.0);
    case PenaltyKind::kLogBarrier: return 1.0 / (x * x);
    default: break;
  }
  return 0.0;
}

ExtendedReal Penalty::kernel_derivative_at_zero() const {
  require_decomposable("kernel_derivative_at_zero");
  switch (kind_) {
    case PenaltyKind::kQuadratic: return 0.0;
    case PenaltyKind::kTsallis:
      if (q_ > 1) return 1.0 / (q_ * (1.0 - q_));
      return ExtendedReal::neg_inf();
    default: return ExtendedReal::neg_inf();
  }
}

double Penalty::kernel_derivative_at_one() const {
  require_decomposable("kernel_derivative_at_one");
  switch (kind_) {
    case PenaltyKind::kGibbs: return 1.0;
    case PenaltyKind::kQuadratic: return 1.0;
    case PenaltyKind::kTsallis: return 1.0 / q_;
    case PenaltyKind::kLogBarrier: return -1.0;
    default: break;
  }
  return 0.0;
}

double Penalty::inverse_kernel_derivative(double z) const {
  require_decomposable("inverse_kernel_derivative");
  const ExtendedReal lo = kernel_derivative_at_zero();
  if (lo.finite() && z <= lo.value()) return 0.0;
  if (z >= kernel_derivative_at_one()) return 1.0;
  double x = 0.0;
  switch (kind_) {
    case PenaltyKind::kGibbs: x = std::exp(z - 1.0); break;
    case PenaltyKind::kQuadratic: x = z; break;
    case PenaltyKind::kTsallis:
      x = std::pow((1.0 - q_ * (1.0 - q_) * z) / q_, 1.0 / (q_ - 1.0));
      break;
    case PenaltyKind::kLogBarrier: x = -1.0 / z; break;
    default: break;
  }
  return std::clamp(x, 0.0, 1.0);
}

void Penalty::check_face(std::span<const double> x,
                         std::span<const int> face) const {
  std::vector<bool> in_face(x.size(), false);
  for (int a : face) {
    if (a < 0 || a >= static_cast<int>(x.size())) {
      throw std::out_of_range("penalty: face index out of range");
    }
    in_face[a] = true;
    if (steep() && !(x[a] > 0)) {
      throw std::domain_error("penalty: zero entry inside the face of a steep penalty");
    }
  }
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (!in_face[a] && x[a] > kSupportThreshold) {
      throw std::invalid_argument("penalty: support not contained in face");
    }
  }
}

Vector Penalty::face_gradient(std::span<const double> x,
                              std::span<const int> face) const {
  check_face(x, face);
  Vector g(face.size());
  if (kind_ == PenaltyKind::kRenyi) {
    double s = 0.0;
    for (int a : face) s += std::pow(x[a], q_);
    for (std::size_t i = 0; i < face.size(); ++i) {
      const double xi = q_ * std::pow(x[face[i]], q_ - 1.0) / s;
      g[i] = xi / (q_ - 1.0);
    }
    return g;
  }
  for (std::size_t i = 0; i < face.size(); ++i) {
    g[i] = kernel_derivative(x[face[i]]);
  }
  return g;
}

Eigen::MatrixXd Penalty::face_hessian(std::span<const double> x,
                                      std::span<const int> face) const {
  check_face(x, face);
  const int m = static_cast<int>(face.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  if (kind_ == PenaltyKind::kRenyi) {
    double s = 0.0;
    for (int a : face) s += std::pow(x[a], q_);
    Eigen::VectorXd xi(m);
    for (int i = 0; i < m; ++i) xi[i] = q_ * std::pow(x[face[i]], q_ - 1.0) / s;
    h = xi * xi.transpose() / (1.0 - q_);
    for (int i = 0; i < m; ++i) h(i, i) += xi[i] / x[face[i]];
    return h;
  }
  for (int i = 0; i < m; ++i) h(i, i) = kernel_second_derivative(x[face[i]]);
  return h;
}

Eigen::MatrixXd Penalty::inverse_face_hessian(std::span<const double> x,
                                              std::span<const int> face) const {
  check_face(x, face);
  const int m = static_cast<int>(face.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  if (kind_ == PenaltyKind::kRenyi) {
    double s = 0.0;
    for (int a : face) s += std::pow(x[a], q_);
    Eigen::VectorXd xf(m);
    for (int i = 0; i < m; ++i) xf[i] = x[face[i]];
    g = -xf * xf.transpose();
    for (int i = 0; i < m; ++i) {
      const double xi = q_ * std::pow(xf[i], q_ - 1.0) / s;
      g(i, i) += xf[i] / xi;
    }
    return g;
  }
  for (int i = 0; i < m; ++i) {
    g(i, i) = 1.0 / kernel_second_derivative(x[face[i]]);
  }
  return g;
}

double tangent_min_eigenvalue(const Eigen::MatrixXd& hessian) {
  const int m = static_cast<int>(hessian.rows());
  if (m < 2) return std::numeric_limits<double>::infinity();
  // Orthonormal basis of the sum-zero subspace from Householder QR of the
  // all-ones column.
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(m, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd basis = q.rightCols(m - 1);
  Eigen::MatrixXd restricted = basis.transpose() * hessian * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(restricted,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double Penalty::convexity_constant(int n) const {
  if (n < 1) throw std::invalid_argument("convexity_constant: n must be >= 1");
  switch (kind_) {
    case PenaltyKind::kGibbs:
    case PenaltyKind::kQuadratic:
    case PenaltyKind::kLogBarrier:
      return 1.0;
    case PenaltyKind::kRenyi:
      // On the tangent space the rank-one term is nonnegative and the
      // diagonal part is q x^{q-2} / sum x^q >= q n^{q-1}.
      return q_ * std::pow(static_cast<double>(n), q_ - 1.0);
    case PenaltyKind::kTsallis:
      if (q_ <= 2.0) return 1.0;
      break;
  }

  // Tsallis with q > 2: the kernel's second derivative vanishes at 0, so the
  // bound comes from sampling face interiors. Memoized per (q, n).
  static thread_local std::map<std::pair<double, int>, double> cache;
  const auto key = std::make_pair(q_, n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::mt19937_64 rng(0x5eed + n);
  std::exponential_distribution<double> expo(1.0);
  constexpr int kSamples = 10000;
  double best = std::numeric_limits<double>::infinity();
  for (int m = 2; m <= n; ++m) {
    std::vector<double> x(m);
    std::vector<int> face(m);
    for (int i = 0; i < m; ++i) face[i] = i;
    for (int s = 0; s < kSamples; ++s) {
      double sum = 0.0;
      for (double& v : x) sum += (v = expo(rng));
      for (double& v : x) v = std::max(v / sum, 1e-300);
      Eigen::MatrixXd h(m, m);
      h.setZero();
      for (int i = 0; i < m; ++i) h(i, i) = std::pow(x[i], q_ - 2.0);
      best = std::min(best, tangent_min_eigenvalue(h));
    }
  }
  // Sampling overestimates the infimum; halve it and floor.
  const double k = std::max(0.5 * best, 1e-6);
  cache[key] = k;
  return k;
}

}  // namespace rlgames
