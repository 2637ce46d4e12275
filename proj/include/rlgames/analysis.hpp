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

#ifndef RLGAMES_ANALYSIS_HPP_
#define RLGAMES_ANALYSIS_HPP_

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlgames/dynamics.hpp"
#include "rlgames/game.hpp"
#include "rlgames/penalty.hpp"

namespace rlgames {

// One pass/fail entry. `value` is compared against `tolerance` in the sense
// described by `detail`.
struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
  nlohmann::json data;
};

struct AnalysisReport {
  std::vector<CheckResult> checks;

  void add(CheckResult check) { checks.push_back(std::move(check)); }
  bool all_passed() const;
  nlohmann::json to_json() const;
  std::string summary_table() const;
};

// Cumulative trapezoid average x_bar(t) = (1/t) int_0^t x(s) ds, with
// x_bar(0) = x(0). Returns a trajectory of the same times without scores.
Trajectory time_average(const Trajectory& traj);

struct ExtinctionReport {
  bool extinct = false;
  std::optional<double> first_time;  // start of the final stretch below threshold
};

ExtinctionReport extinction_report(const Trajectory& traj, int k, int action,
                                   double threshold = kSupportThreshold);

struct EnvelopeOptions {
  // Samples used to fit c and to count violations; +inf means the end.
  double fit_begin = 0.0;
  double fit_end = std::numeric_limits<double>::infinity();
  double check_begin = 0.0;
  double check_end = std::numeric_limits<double>::infinity();
  double slack = 1e-9;
};

struct EnvelopeFit {
  double c_fit = -std::numeric_limits<double>::infinity();
  int violations = 0;
  std::size_t samples_checked = 0;
  // Bound implied by the initial scores and the dominator, when available.
  std::optional<double> c_theory;
  bool theory_holds = true;  // no sample exceeds the c_theory envelope
};

// Fits the smallest c with x_{k,action}(t) <= rate(c - gamma delta t) + slack
// on the fit window and counts violations on the check window. With a
// dominator and stored scores, also evaluates the envelope with
// c = y_action(0) - <dominator, y(0)> + kernel'(1-).
EnvelopeFit rate_envelope_check(const Trajectory& traj, int k, int action,
                                const Penalty& penalty, double rate,
                                double delta, const EnvelopeOptions& opts = {},
                                const std::optional<Vector>& dominator = {});

// Fenchel coupling F(p, y(t)) for every stored sample.
std::vector<double> fenchel_series_serial(const Trajectory& traj,
                                          const std::vector<Penalty>& penalties,
                                          const StrategyProfile& p);
std::vector<double> fenchel_series_parallel(const Trajectory& traj,
                                            const std::vector<Penalty>& penalties,
                                            const StrategyProfile& p);
std::vector<double> fenchel_series(const Trajectory& traj,
                                   const std::vector<Penalty>& penalties,
                                   const StrategyProfile& p);

struct ConservationReport {
  double max_drift = 0.0;
  double initial = 0.0;
  std::vector<double> series;
};

// Requires a two-player zero-sum game and an interior Nash equilibrium p.
ConservationReport zero_sum_conservation(const Trajectory& traj, const Game& game,
                                         const std::vector<Penalty>& penalties,
                                         const StrategyProfile& p);

struct ScoreGapReport {
  // series[k][i]: max_{a,b} |y_a - y_b| for player k at sample i.
  std::vector<std::vector<double>> series;
  std::vector<double> max_gap;
};

ScoreGapReport score_gap_series(const Trajectory& traj);

struct TrackingReport {
  std::vector<double> gap;  // delta(t)
  double early_mean = 0.0;  // first 10% of the horizon
  double late_mean = 0.0;   // last 10% of the horizon
  double final_gap = 0.0;
  bool decreasing = false;
};

TrackingReport br_tracking_gap(const Trajectory& traj, const Game& game);

struct StrictConvergenceOptions {
  double epsilon = 0.1;
  double sustain_fraction = 0.1;
  double tolerance = 1e-6;
  EnvelopeOptions envelope;
};

struct StrictConvergenceReport {
  bool converged = false;
  double final_residual = 0.0;  // ||x(T) - x*||_inf
  std::optional<double> exact_time;  // residual <= 1e-12 from here on
  bool envelope_checked = false;
  bool envelope_ok = false;
  int envelope_violations = 0;
  // c_fit[k][mu] for each non-equilibrium action mu (NaN at the equilibrium
  // action).
  std::vector<std::vector<double>> c_fit;
};

StrictConvergenceReport strict_convergence_report(
    const Trajectory& traj, const Game& game, const std::vector<int>& x_star,
    const std::vector<Penalty>& penalties, const std::vector<double>& rates,
    const StrictConvergenceOptions& opts = {});

enum class WeakDominanceClause { kDominatedExtinct, kOpponentsExtinct, kBoth, kInconclusive };
std::string to_string(WeakDominanceClause c);

struct WeakDominanceReport {
  bool dominated_extinct = false;
  std::vector<std::vector<int>> witnesses;  // opponent profiles with strict gap
  std::vector<bool> witness_extinct;
  WeakDominanceClause clause = WeakDominanceClause::kInconclusive;
};

// p and p_prime are mixed strategies of player k with p weakly dominated by
// p_prime; throws std::invalid_argument otherwise.
WeakDominanceReport weak_dominance_report(const Trajectory& traj, const Game& game,
                                          int k, const Vector& p,
                                          const Vector& p_prime,
                                          double threshold = kSupportThreshold);

// Whether x(t) stays within `tolerance` of x_star over the last
// `fraction` of the stored horizon.
bool converged_to(const Trajectory& traj, std::span<const double> x_star,
                  double tolerance = 1e-6, double fraction = 0.1);

struct PayoffSpreadReport {
  std::vector<double> spread;  // per player, at x_bar(T)
  std::vector<double> bound;   // (max gap + initial gap) / (gamma T) + tol
  bool passed = false;
};

// In two-player games v_k(x_bar(T)) = (y_k(T) - y_k(0)) / (gamma_k T) under
// the plain score dynamics, so bounded score gaps force the payoff spread at
// the time average to shrink like 1/T.
PayoffSpreadReport time_average_payoff_spread(const Trajectory& traj,
                                              const Game& game,
                                              const std::vector<double>& rates,
                                              double tolerance = 1e-4);

struct StationarityReport {
  bool center_is_nash = false;
  bool stays_near = false;
  double duration = 0.0;
  bool contradiction = false;  // stayed near a non-Nash point for long enough
};

// A trajectory of the score dynamics cannot remain near a non-equilibrium
// point for long; flags trajectories that do.
StationarityReport stationarity_check(const Trajectory& traj, const Game& game,
                                      const StrategyProfile& center,
                                      double radius = 0.05,
                                      double min_duration = 100.0);

struct FenchelDerivativeReport {
  double max_error = 0.0;  // over smooth steps
  std::vector<double> errors;  // per step
  // Steps where a player with a nonsteep penalty changes support. The
  // bracket has a kink there, so the trapezoid rule is only O(dt) accurate;
  // these steps are excluded from max_error and reported separately.
  std::vector<std::size_t> kink_steps;
  double max_kink_error = 0.0;
};

// |(F_{i+1} - F_i)/dt - trapezoid of sum_k gamma_k <v_k, x_k - p_k>| per
// stored step.
FenchelDerivativeReport fenchel_derivative_check(
    const Trajectory& traj, const Game& game,
    const std::vector<Penalty>& penalties, const std::vector<double>& rates,
    const StrategyProfile& p);

double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace rlgames

#endif  // RLGAMES_ANALYSIS_HPP_
