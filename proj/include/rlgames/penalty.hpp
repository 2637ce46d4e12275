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

#ifndef RLGAMES_PENALTY_HPP_
#define RLGAMES_PENALTY_HPP_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rlgames/extended_real.hpp"
#include "rlgames/game.hpp"

namespace rlgames {

// Raised when a kernel-level operation is requested from a penalty that is
// not a sum of one-dimensional kernels.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class PenaltyKind { kGibbs, kQuadratic, kTsallis, kRenyi, kLogBarrier };

// A strongly convex regularizer on the simplex. The decomposable kinds are
// h(x) = sum_a kernel(x_a); Renyi is not decomposable.
class Penalty {
 public:
  static Penalty gibbs();
  static Penalty quadratic();
  // q > 0. Within 1e-8 of q = 1 this returns the Gibbs penalty.
  static Penalty tsallis(double q);
  // q in (0, 1).
  static Penalty renyi(double q);
  static Penalty log_barrier();

  // gibbs | quad | tsallis:<q> | renyi:<q> | logbar
  static Penalty parse(const std::string& text);
  std::string to_string() const;

  PenaltyKind kind() const { return kind_; }
  double q() const { return q_; }
  bool decomposable() const { return kind_ != PenaltyKind::kRenyi; }
  // Gradient blows up at the boundary.
  bool steep() const;

  // h(x). x must be in the simplex (sum within 1e-9, no negative entries).
  // The log barrier is +inf on the boundary.
  ExtendedReal value(std::span<const double> x) const;
  // Same as value() without validation, for interior points or internal use.
  ExtendedReal value_unchecked(std::span<const double> x) const;

  // One-dimensional kernel and its derivatives (decomposable kinds only).
  double kernel(double x) const;
  double kernel_derivative(double x) const;
  double kernel_second_derivative(double x) const;
  // Limits of the kernel derivative at the ends of (0, 1).
  ExtendedReal kernel_derivative_at_zero() const;
  double kernel_derivative_at_one() const;
  // Inverse of the kernel derivative, clamped to [0, 1]: 0 below the value at
  // 0+, 1 above the value at 1-.
  double inverse_kernel_derivative(double z) const;
  double rate_function(double z) const { return inverse_kernel_derivative(z); }

  // Partial derivatives of h restricted to the face spanned by `face`, one
  // entry per element of `face`. Requires supp(x) within `face` and, for
  // steep kinds, x > 0 on `face`.
  Vector face_gradient(std::span<const double> x, std::span<const int> face) const;
  Eigen::MatrixXd face_hessian(std::span<const double> x,
                               std::span<const int> face) const;
  // Closed-form inverse of face_hessian.
  Eigen::MatrixXd inverse_face_hessian(std::span<const double> x,
                                       std::span<const int> face) const;

  // Lower bound on the smallest eigenvalue of the Hessian restricted to
  // tangent directions of faces of the n-simplex. Exact for the kinds whose
  // kernel has second derivative >= 1; a conservative estimate otherwise.
  double convexity_constant(int n) const;

 private:
  Penalty(PenaltyKind kind, double q) : kind_(kind), q_(q) {}
  void require_decomposable(const char* what) const;
  void check_face(std::span<const double> x, std::span<const int> face) const;

  PenaltyKind kind_;
  double q_ = 1.0;
};

// Smallest eigenvalue of `hessian` on the subspace {u : sum(u) = 0}.
double tangent_min_eigenvalue(const Eigen::MatrixXd& hessian);

}  // namespace rlgames

#endif  // RLGAMES_PENALTY_HPP_
