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

#include "rlgames/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "rlgames/choice.hpp"
#include "rlgames/coupling.hpp"

namespace rlgames {
namespace {

std::vector<int> offsets_of(const std::vector<int>& counts) {
  std::vector<int> offsets(counts.size());
  int acc = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    offsets[k] = acc;
    acc += counts[k];
  }
  return offsets;
}

void require_nonempty(const Trajectory& traj) {
  if (traj.empty()) throw std::invalid_argument("analysis: empty trajectory");
}

void require_scores(const Trajectory& traj, const char* what) {
  if (!traj.has_scores()) {
    throw UnsupportedOperation(std::string(what) +
                               " needs stored scores; this trajectory has none "
                               "(direct strategy-space run)");
  }
}

void check_index(const Trajectory& traj, int k, int action) {
  if (k < 0 || k >= static_cast<int>(traj.counts().size()) || action < 0 ||
      action >= traj.counts()[k]) {
    throw std::out_of_range("analysis: player/action index out of range");
  }
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

// First index after which `below(i)` holds for every remaining sample.
std::optional<std::size_t> final_stretch(std::size_t n,
                                         const std::function<bool(std::size_t)>& below) {
  std::optional<std::size_t> start;
  for (std::size_t i = n; i-- > 0;) {
    if (!below(i)) break;
    start = i;
  }
  return start;
}

}  // namespace

// ---------------------------------------------------------------------------
// Report

bool AnalysisReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

nlohmann::json AnalysisReport::to_json() const {
  nlohmann::json j;
  j["passed"] = all_passed();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"passed", c.passed},
                   {"value", number_or_null(c.value)},
                   {"tolerance", number_or_null(c.tolerance)},
                   {"detail", c.detail},
                   {"data", c.data}});
  }
  j["checks"] = std::move(arr);
  return j;
}

std::string AnalysisReport::summary_table() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-6s %14s %14s  %s\n", "check", "result",
                "value", "tolerance", "detail");
  os << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-28s %-6s %14.6g %14.6g  %s\n",
                  c.name.c_str(), c.passed ? "pass" : "FAIL", c.value, c.tolerance,
                  c.detail.c_str());
    os << line;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Time averages and extinction

Trajectory time_average(const Trajectory& traj) {
  require_nonempty(traj);
  Trajectory out(traj.counts(), false);
  out.spec = traj.spec;
  out.integrator = traj.integrator;
  out.dt = traj.dt;
  out.horizon = traj.horizon;
  const int w = traj.width();
  std::vector<double> integral(w, 0.0), avg(w);
  const double t0 = traj.time(0);
  out.append(t0, traj.x(0));
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double h = traj.time(i) - traj.time(i - 1);
    auto a = traj.x(i - 1);
    auto b = traj.x(i);
    for (int j = 0; j < w; ++j) integral[j] += 0.5 * h * (a[j] + b[j]);
    const double span = traj.time(i) - t0;
    for (int j = 0; j < w; ++j) avg[j] = integral[j] / span;
    out.append(traj.time(i), avg);
  }
  return out;
}

ExtinctionReport extinction_report(const Trajectory& traj, int k, int action,
                                   double threshold) {
  require_nonempty(traj);
  check_index(traj, k, action);
  const int col = offsets_of(traj.counts())[k] + action;
  const auto start = final_stretch(traj.size(), [&](std::size_t i) {
    return traj.x(i)[col] <= threshold;
  });
  ExtinctionReport r;
  if (start) {
    r.extinct = true;
    r.first_time = traj.time(*start);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rate envelopes

EnvelopeFit rate_envelope_check(const Trajectory& traj, int k, int action,
                                const Penalty& penalty, double rate, double delta,
                                const EnvelopeOptions& opts,
                                const std::optional<Vector>& dominator) {
  require_nonempty(traj);
  check_index(traj, k, action);
  if (!penalty.decomposable()) {
    throw UnsupportedOperation("rate envelope needs a decomposable penalty, got " +
                               penalty.to_string());
  }
  if (!(delta > 0) || !(rate > 0)) {
    throw std::invalid_argument("rate envelope: rate and payoff gap must be positive");
  }
  const int col = offsets_of(traj.counts())[k] + action;
  const double top = penalty.kernel_derivative_at_one();
  EnvelopeFit fit;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.time(i);
    if (t < opts.fit_begin || t > opts.fit_end) continue;
    const double target = traj.x(i)[col] - opts.slack;
    if (target <= 0) continue;
    const double z = target >= 1.0 ? top : penalty.kernel_derivative(target);
    fit.c_fit = std::max(fit.c_fit, z + rate * delta * t);
  }
  auto envelope = [&](double c, double t) {
    if (c == -std::numeric_limits<double>::infinity()) return 0.0;
    return penalty.rate_function(c - rate * delta * t);
  };
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.time(i);
    if (t < opts.check_begin || t > opts.check_end) continue;
    ++fit.samples_checked;
    const double x = traj.x(i)[col];
    if (x > envelope(fit.c_fit, t) + opts.slack + 1e-12) ++fit.violations;
  }
  if (dominator && traj.has_scores()) {
    const int off = offsets_of(traj.counts())[k];
    auto y0 = traj.y(0);
    double pair = 0.0;
    for (std::size_t b = 0; b < dominator->size(); ++b) pair += (*dominator)[b] * y0[off + b];
    fit.c_theory = y0[col] - pair + top;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double x = traj.x(i)[col];
      if (x > envelope(*fit.c_theory, traj.time(i)) + opts.slack + 1e-12) {
        fit.theory_holds = false;
        break;
      }
    }
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Fenchel coupling along trajectories

std::vector<double> fenchel_series_serial(const Trajectory& traj,
                                          const std::vector<Penalty>& penalties,
                                          const StrategyProfile& p) {
  require_scores(traj, "Fenchel coupling");
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out[i] = fenchel_profile(penalties, p, traj.score(i));
  }
  return out;
}

std::vector<double> fenchel_series_parallel(const Trajectory& traj,
                                            const std::vector<Penalty>& penalties,
                                            const StrategyProfile& p) {
  require_scores(traj, "Fenchel coupling");
  std::vector<double> out(traj.size());
  const long long n = static_cast<long long>(traj.size());
  std::string error;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = fenchel_profile(penalties, p, traj.score(i));
    } catch (const std::exception& e) {
#pragma omp critical
      error = e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error(error);
  return out;
}

std::vector<double> fenchel_series(const Trajectory& traj,
                                   const std::vector<Penalty>& penalties,
                                   const StrategyProfile& p) {
  if (traj.size() >= 4096 && omp_get_max_threads() > 1) {
    return fenchel_series_parallel(traj, penalties, p);
  }
  return fenchel_series_serial(traj, penalties, p);
}

ConservationReport zero_sum_conservation(const Trajectory& traj, const Game& game,
                                         const std::vector<Penalty>& penalties,
                                         const StrategyProfile& p) {
  require_nonempty(traj);
  if (game.num_players() != 2 || !is_zero_sum(game)) {
    throw std::invalid_argument("zero-sum conservation: game is not two-player zero-sum");
  }
  game.check_profile(p);
  for (int k = 0; k < 2; ++k) {
    for (double e : p[k]) {
      if (!(e > kSupportThreshold)) {
        throw std::invalid_argument("zero-sum conservation: p must be interior");
      }
    }
  }
  if (!is_nash(game, p, 1e-9).is_nash) {
    throw std::invalid_argument("zero-sum conservation: p is not a Nash equilibrium");
  }
  ConservationReport r;
  r.series = fenchel_series(traj, penalties, p);
  r.initial = r.series.front();
  for (double f : r.series) r.max_drift = std::max(r.max_drift, std::abs(f - r.initial));
  return r;
}

FenchelDerivativeReport fenchel_derivative_check(
    const Trajectory& traj, const Game& game,
    const std::vector<Penalty>& penalties, const std::vector<double>& rates,
    const StrategyProfile& p) {
  require_nonempty(traj);
  game.check_profile(p);
  const std::vector<double> f = fenchel_series(traj, penalties, p);
  const std::vector<int> offsets = offsets_of(game.action_counts());
  std::vector<double> v(game.total_actions());
  auto bracket = [&](std::size_t i) {
    auto x = traj.x(i);
    all_payoff_vectors(game, x, v);
    double s = 0.0;
    for (int k = 0; k < game.num_players(); ++k) {
      const double g = rates.empty() ? 1.0 : rates[k];
      double dot = 0.0;
      for (int a = 0; a < game.num_actions(k); ++a) {
        dot += v[offsets[k] + a] * (x[offsets[k] + a] - p[k][a]);
      }
      s += g * dot;
    }
    return s;
  };
  auto support_changes = [&](std::size_t i) {
    for (int k = 0; k < game.num_players(); ++k) {
      if (penalties[k].steep()) continue;
      const std::size_t n = game.num_actions(k);
      const auto a = traj.x(i).subspan(offsets[k], n);
      const auto b = traj.x(i + 1).subspan(offsets[k], n);
      if (support(a) != support(b)) return true;
    }
    return false;
  };
  FenchelDerivativeReport r;
  double prev = bracket(0);
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double next = bracket(i + 1);
    const double h = traj.time(i + 1) - traj.time(i);
    const double err = std::abs((f[i + 1] - f[i]) / h - 0.5 * (prev + next));
    r.errors.push_back(err);
    if (support_changes(i)) {
      r.kink_steps.push_back(i);
      r.max_kink_error = std::max(r.max_kink_error, err);
    } else {
      r.max_error = std::max(r.max_error, err);
    }
    prev = next;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Score gaps, tracking, spreads

ScoreGapReport score_gap_series(const Trajectory& traj) {
  require_nonempty(traj);
  require_scores(traj, "score gap series");
  const std::vector<int> offsets = offsets_of(traj.counts());
  const int players = static_cast<int>(traj.counts().size());
  ScoreGapReport r;
  r.series.assign(players, std::vector<double>(traj.size()));
  r.max_gap.assign(players, 0.0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    auto y = traj.y(i);
    for (int k = 0; k < players; ++k) {
      auto yk = y.subspan(offsets[k], traj.counts()[k]);
      const auto [lo, hi] = std::minmax_element(yk.begin(), yk.end());
      r.series[k][i] = *hi - *lo;
      r.max_gap[k] = std::max(r.max_gap[k], r.series[k][i]);
    }
  }
  return r;
}

TrackingReport br_tracking_gap(const Trajectory& traj, const Game& game) {
  require_nonempty(traj);
  if (game.num_players() != 2) {
    throw std::invalid_argument("best-response tracking needs a two-player game");
  }
  if (traj.counts() != game.action_counts()) {
    throw std::invalid_argument("trajectory does not match the game");
  }
  const Trajectory avg = time_average(traj);
  const std::vector<int> offsets = offsets_of(game.action_counts());
  std::vector<double> v(game.total_actions());
  TrackingReport r;
  r.gap.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    all_payoff_vectors(game, avg.x(i), v);
    auto x = traj.x(i);
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
      double best = -std::numeric_limits<double>::infinity();
      double played = 0.0;
      for (int a = 0; a < game.num_actions(k); ++a) {
        best = std::max(best, v[offsets[k] + a]);
        played += v[offsets[k] + a] * x[offsets[k] + a];
      }
      worst = std::max(worst, best - played);
    }
    r.gap[i] = worst;
  }
  const double t0 = traj.time(0);
  const double t1 = traj.time(traj.size() - 1);
  const double tenth = 0.1 * (t1 - t0);
  double early = 0.0, late = 0.0;
  int ne = 0, nl = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.time(i) <= t0 + tenth) {
      early += r.gap[i];
      ++ne;
    }
    if (traj.time(i) >= t1 - tenth) {
      late += r.gap[i];
      ++nl;
    }
  }
  r.early_mean = ne ? early / ne : 0.0;
  r.late_mean = nl ? late / nl : 0.0;
  r.final_gap = r.gap.back();
  r.decreasing = r.late_mean <= r.early_mean;
  return r;
}

PayoffSpreadReport time_average_payoff_spread(const Trajectory& traj,
                                              const Game& game,
                                              const std::vector<double>& rates,
                                              double tolerance) {
  require_nonempty(traj);
  require_scores(traj, "payoff spread bound");
  if (game.num_players() != 2) {
    throw std::invalid_argument("payoff spread bound needs a two-player game");
  }
  const Trajectory avg = time_average(traj);
  const ScoreGapReport gaps = score_gap_series(traj);
  const double horizon = traj.time(traj.size() - 1) - traj.time(0);
  if (!(horizon > 0)) throw std::invalid_argument("payoff spread: zero horizon");
  std::vector<double> v(game.total_actions());
  all_payoff_vectors(game, avg.x(avg.size() - 1), v);
  const std::vector<int> offsets = offsets_of(game.action_counts());
  PayoffSpreadReport r;
  r.passed = true;
  for (int k = 0; k < 2; ++k) {
    auto vk = std::span<const double>(v).subspan(offsets[k], game.num_actions(k));
    const auto [lo, hi] = std::minmax_element(vk.begin(), vk.end());
    const double g = rates.empty() ? 1.0 : rates[k];
    r.spread.push_back(*hi - *lo);
    r.bound.push_back((gaps.max_gap[k] + gaps.series[k][0]) / (g * horizon) + tolerance);
    if (r.spread.back() > r.bound.back()) r.passed = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Convergence

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool converged_to(const Trajectory& traj, std::span<const double> x_star,
                  double tolerance, double fraction) {
  require_nonempty(traj);
  const double t1 = traj.time(traj.size() - 1);
  const double from = t1 - fraction * (t1 - traj.time(0));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.time(i) < from) continue;
    if (sup_distance(traj.x(i), x_star) > tolerance) return false;
  }
  return true;
}

StrictConvergenceReport strict_convergence_report(
    const Trajectory& traj, const Game& game, const std::vector<int>& x_star,
    const std::vector<Penalty>& penalties, const std::vector<double>& rates,
    const StrictConvergenceOptions& opts) {
  require_nonempty(traj);
  if (!is_strict_pure_equilibrium(game, x_star)) {
    throw std::invalid_argument("strict convergence: target is not a strict equilibrium");
  }
  const StrategyProfile target = StrategyProfile::pure(game.action_counts(), x_star);
  StrictConvergenceReport r;
  r.converged = converged_to(traj, target.flat(), opts.tolerance, opts.sustain_fraction);
  r.final_residual = sup_distance(traj.x(traj.size() - 1), target.flat());
  const auto start = final_stretch(traj.size(), [&](std::size_t i) {
    return sup_distance(traj.x(i), target.flat()) <= 1e-12;
  });
  if (start) r.exact_time = traj.time(*start);

  const bool decomposable =
      static_cast<int>(penalties.size()) == game.num_players() &&
      std::all_of(penalties.begin(), penalties.end(),
                  [](const Penalty& p) { return p.decomposable(); });
  if (!decomposable) return r;
  r.envelope_checked = true;
  r.envelope_ok = true;
  std::vector<double> v(game.total_actions());
  all_payoff_vectors(game, target.flat(), v);
  const std::vector<int> offsets = offsets_of(game.action_counts());
  r.c_fit.resize(game.num_players());
  for (int k = 0; k < game.num_players(); ++k) {
    const double gamma = rates.empty() ? 1.0 : rates[k];
    const double own = v[offsets[k] + x_star[k]];
    r.c_fit[k].assign(game.num_actions(k), std::numeric_limits<double>::quiet_NaN());
    for (int mu = 0; mu < game.num_actions(k); ++mu) {
      if (mu == x_star[k]) continue;
      const double delta = own - v[offsets[k] + mu];
      const EnvelopeFit fit = rate_envelope_check(
          traj, k, mu, penalties[k], (1.0 - opts.epsilon) * gamma, delta, opts.envelope);
      r.c_fit[k][mu] = fit.c_fit;
      r.envelope_violations += fit.violations;
    }
  }
  r.envelope_ok = r.envelope_violations == 0;
  return r;
}

// ---------------------------------------------------------------------------
// Weak dominance

std::string to_string(WeakDominanceClause c) {
  switch (c) {
    case WeakDominanceClause::kDominatedExtinct: return "dominated-extinct";
    case WeakDominanceClause::kOpponentsExtinct: return "opponents-extinct";
    case WeakDominanceClause::kBoth: return "both";
    case WeakDominanceClause::kInconclusive: return "inconclusive";
  }
  return "?";
}

WeakDominanceReport weak_dominance_report(const Trajectory& traj, const Game& game,
                                          int k, const Vector& p,
                                          const Vector& p_prime, double threshold) {
  require_nonempty(traj);
  if (traj.counts() != game.action_counts()) {
    throw std::invalid_argument("trajectory does not match the game");
  }
  const Dominance d = check_dominance(game, k, p, p_prime);
  if (d.margin < -1e-9 || d.strict_profiles.empty()) {
    throw std::invalid_argument("weak dominance: pair is not weakly dominated");
  }
  const std::vector<int> offsets = offsets_of(game.action_counts());
  WeakDominanceReport r;
  r.witnesses = d.strict_profiles;
  const std::vector<int> supp = support(p);
  r.dominated_extinct = final_stretch(traj.size(), [&](std::size_t i) {
                          auto x = traj.x(i);
                          double m = 1.0;
                          for (int a : supp) m = std::min(m, x[offsets[k] + a]);
                          return m <= threshold;
                        }).has_value();
  for (const auto& w : r.witnesses) {
    const bool extinct = final_stretch(traj.size(), [&](std::size_t i) {
                           auto x = traj.x(i);
                           double prob = 1.0;
                           int j = 0;
                           for (int l = 0; l < game.num_players(); ++l) {
                             if (l == k) continue;
                             prob *= x[offsets[l] + w[j++]];
                           }
                           return prob <= threshold;
                         }).has_value();
    r.witness_extinct.push_back(extinct);
  }
  const bool all_witnesses =
      std::all_of(r.witness_extinct.begin(), r.witness_extinct.end(),
                  [](bool b) { return b; });
  if (r.dominated_extinct && all_witnesses) {
    r.clause = WeakDominanceClause::kBoth;
  } else if (r.dominated_extinct) {
    r.clause = WeakDominanceClause::kDominatedExtinct;
  } else if (all_witnesses) {
    r.clause = WeakDominanceClause::kOpponentsExtinct;
  }
  return r;
}

StationarityReport stationarity_check(const Trajectory& traj, const Game& game,
                                      const StrategyProfile& center, double radius,
                                      double min_duration) {
  require_nonempty(traj);
  game.check_profile(center);
  StationarityReport r;
  r.center_is_nash = is_nash(game, center, 1e-9).is_nash;
  r.duration = traj.time(traj.size() - 1) - traj.time(0);
  r.stays_near = true;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (sup_distance(traj.x(i), center.flat()) > radius) {
      r.stays_near = false;
      break;
    }
  }
  r.contradiction = r.stays_near && !r.center_is_nash && r.duration >= min_duration;
  return r;
}

}  // namespace rlgames
