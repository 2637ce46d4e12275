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

#ifndef RLGAMES_DYNAMICS_HPP_
#define RLGAMES_DYNAMICS_HPP_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlgames/game.hpp"
#include "rlgames/penalty.hpp"

namespace rlgames {

enum class Variant {
  kScoreRL,      // y' = gamma v(Q(y))
  kDiscounted,   // y' = gamma v(Q(y)) + log(lambda) y
  kNoiseLevel,   // y' = v(x), x = Q(gamma y)
  kErevRoth,     // y' = x * v(x), x = y / sum(y)
  kCrossBS,      // strategy-space Cross learning model
  kUnpenalized,  // exact argmax of the scores, Euler steps
  kDirectField,  // strategy-space field integrated directly
};

enum class FieldKind {
  kGenericRLD,   // inverse face Hessian of the player's penalty
  kReplicator,
  kProjection,
  kQReplicator,  // uses field_q
  kRenyi,        // uses field_q
  kLogBarrier,
};

enum class TieRule { kLowestIndex, kUniform };

std::string to_string(Variant v);
std::string to_string(FieldKind f);
std::string to_string(TieRule t);
Variant parse_variant(const std::string& s);
FieldKind parse_field_kind(const std::string& s);
TieRule parse_tie_rule(const std::string& s);

struct DynamicsSpec {
  Variant variant = Variant::kScoreRL;
  std::vector<Penalty> penalties;  // one per player where a choice map is used
  std::vector<double> rates;       // gamma_k; empty means all ones
  double discount = 1.0;           // lambda in (0, 1]
  FieldKind field = FieldKind::kReplicator;
  double field_q = 1.0;
  TieRule tie = TieRule::kLowestIndex;
  double warmup = 1.0;  // tau for the unpenalized variant

  // Throws std::invalid_argument when the spec does not fit the game.
  void validate(const Game& game) const;
  double rate(int k) const { return rates.empty() ? 1.0 : rates[k]; }
  bool uses_penalties() const;
  // Direct integration of a field whose penalty is not steep: trajectories
  // may reach the boundary and are continued on the smaller face.
  bool extended_solution_mode() const;

  nlohmann::json to_json() const;
  static DynamicsSpec from_json(const nlohmann::json& j);
};

// Raised by the direct integrator when a step leaves the simplex by more
// than the allowed drift.
class StepRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SupportEvent {
  double t = 0.0;
  int player = 0;
  int action = 0;
};

struct SelectionEvent {
  double t = 0.0;
  int player = 0;
  std::vector<int> actions;  // maximizers selected from this time on
};

class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<int> counts, bool has_scores);

  const std::vector<int>& counts() const { return counts_; }
  int width() const { return width_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  bool has_scores() const { return has_scores_; }
  bool has_averages() const { return !averages_.empty(); }

  double time(std::size_t i) const { return times_[i]; }
  const std::vector<double>& times() const { return times_; }
  std::span<const double> x(std::size_t i) const {
    return {x_.data() + i * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const double> y(std::size_t i) const;
  // Marginals of the running correlated average (unpenalized runs only).
  std::span<const double> average(std::size_t i) const;
  StrategyProfile strategy(std::size_t i) const;
  ScoreProfile score(std::size_t i) const;

  // Appends a sample; times must increase strictly.
  void append(double t, std::span<const double> x,
              std::span<const double> y = {},
              std::span<const double> average = {});

  // Run metadata.
  DynamicsSpec spec;
  std::string integrator;
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<SupportEvent> support_events;
  std::vector<SelectionEvent> selection_events;
  std::vector<double> final_correlated;  // unpenalized runs only
  double max_identity_error = 0.0;       // unpenalized runs with warm-up

 private:
  std::vector<int> counts_;
  int width_ = 0;
  bool has_scores_ = false;
  std::vector<double> times_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> averages_;
};

// Fixed-step integration over [0, T] with N = round(T / dt) steps; every
// `stride`-th step (and the last) is stored.
struct IntegrationOptions {
  double horizon = 1.0;
  double dt = 1e-3;
  int stride = 1;
};

// Score-based variants (RL, discounted, noise level, Erev-Roth, unpenalized
// with an explicit initial score).
Trajectory integrate(const Game& game, const DynamicsSpec& spec,
                     const ScoreProfile& y0, const IntegrationOptions& opts);
// Strategy-based variants (direct field, Cross).
Trajectory integrate(const Game& game, const DynamicsSpec& spec,
                     const StrategyProfile& x0, const IntegrationOptions& opts);
// Unpenalized variant. Without y0, the warm-up of length spec.warmup with
// uniform play sets y(0) = tau v(uniform), and the identity between the
// scores and the averaged correlated strategy is checked every step.
Trajectory integrate_unpenalized(const Game& game, const DynamicsSpec& spec,
                                 const std::optional<ScoreProfile>& y0,
                                 const IntegrationOptions& opts);

// Right-hand sides, exposed for tests and diagnostics.
ScoreProfile score_field(const Game& game, const DynamicsSpec& spec,
                         const ScoreProfile& y);
// Strategy of the score-based variants at y.
StrategyProfile strategy_of(const DynamicsSpec& spec, const ScoreProfile& y);

// Field of one player given its strategy and payoff vector, computed on the
// face supp(x). `penalty` is needed for kGenericRLD only.
Vector player_field(FieldKind kind, double q, const Penalty* penalty,
                    std::span<const double> x, std::span<const double> v);
// Full strategy-space field of a DirectField spec.
std::vector<double> strategy_field(const Game& game, const DynamicsSpec& spec,
                                   const StrategyProfile& x);

// x' = w (v - sum_S w v / sum_S w) on the face S = supp(x).
Vector weighted_field(std::span<const double> weights,
                      std::span<const double> x, std::span<const double> v);

ScoreProfile erev_roth_field(const Game& game, const ScoreProfile& y);
std::vector<double> cross_bs_field(const Game& game, const StrategyProfile& x);

struct UnpenalizedState {
  ScoreProfile y;
  std::vector<double> correlated;  // running average, game profile layout
  double t = 0.0;
  StrategyProfile played;  // selection used for the step just taken
};

// One Euler step of the unpenalized dynamics.
UnpenalizedState unpenalized_step(const Game& game, const DynamicsSpec& spec,
                                  const UnpenalizedState& state, double dt);

// Argmax selection of one player's scores under the tie rule.
Vector select_best(std::span<const double> y, TieRule tie);

// Best-response dynamics dx/ds = br(x) - x by Euler steps, for comparing the
// averaged unpenalized dynamics after the time change s = log((tau+t)/tau).
Trajectory integrate_brd(const Game& game, const StrategyProfile& x0,
                         TieRule tie, const IntegrationOptions& opts);

}  // namespace rlgames

#endif  // RLGAMES_DYNAMICS_HPP_
