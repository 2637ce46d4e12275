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

#include "rlgames/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rlgames/kernels.hpp"
#include "rlgames/simplex_lp.hpp"

namespace rlgames {
namespace {

std::vector<int> offsets_of(const std::vector<int>& counts) {
  std::vector<int> offsets(counts.size());
  int acc = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] <= 0) throw std::invalid_argument("profile: empty player");
    offsets[k] = acc;
    acc += counts[k];
  }
  return offsets;
}

int total_of(const std::vector<int>& counts) {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

// Flat indices of profiles in which player k plays action 0; adding
// a * stride(k) selects action a against the same opponents.
std::vector<std::size_t> opponent_bases(const Game& game, int k) {
  std::vector<std::size_t> bases;
  const std::size_t stride = game.stride(k);
  const std::size_t n = game.num_actions(k);
  bases.reserve(game.num_profiles() / n);
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx) {
    if ((idx / stride) % n == 0) bases.push_back(idx);
  }
  return bases;
}

std::vector<int> opponent_actions(const Game& game, int k, std::size_t base) {
  std::vector<int> profile = game.decode_profile(base);
  profile.erase(profile.begin() + k);
  return profile;
}

constexpr double kDominanceTol = 1e-9;

}  // namespace

std::vector<int> support(std::span<const double> x, double threshold) {
  std::vector<int> s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > threshold) s.push_back(static_cast<int>(i));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Profiles

FlatProfile::FlatProfile(std::vector<int> counts, double fill)
    : counts_(std::move(counts)), offsets_(offsets_of(counts_)),
      data_(total_of(counts_), fill) {}

FlatProfile::FlatProfile(std::vector<int> counts, std::vector<double> data)
    : counts_(std::move(counts)), offsets_(offsets_of(counts_)),
      data_(std::move(data)) {
  if (static_cast<int>(data_.size()) != total_of(counts_)) {
    throw std::invalid_argument("profile: data size does not match counts");
  }
}

FlatProfile::FlatProfile(const std::vector<Vector>& per_player) {
  for (const auto& v : per_player) {
    counts_.push_back(static_cast<int>(v.size()));
    data_.insert(data_.end(), v.begin(), v.end());
  }
  offsets_ = offsets_of(counts_);
}

std::vector<Vector> FlatProfile::to_vectors() const {
  std::vector<Vector> out;
  for (int k = 0; k < num_players(); ++k) {
    auto s = (*this)[k];
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

StrategyProfile::StrategyProfile(const std::vector<Vector>& per_player,
                                 double tolerance)
    : FlatProfile(per_player) {
  validate_and_normalize(tolerance);
}

StrategyProfile::StrategyProfile(std::vector<int> counts,
                                 std::vector<double> data, double tolerance)
    : FlatProfile(std::move(counts), std::move(data)) {
  validate_and_normalize(tolerance);
}

void StrategyProfile::validate_and_normalize(double tolerance) {
  for (int k = 0; k < num_players(); ++k) {
    double* begin = data_.data() + offsets_[k];
    double* end = begin + counts_[k];
    double sum = 0.0;
    for (double* p = begin; p != end; ++p) {
      if (!std::isfinite(*p) || *p < -tolerance) {
        throw std::invalid_argument("strategy: negative or non-finite entry");
      }
      if (*p < 0) *p = 0.0;
      sum += *p;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      throw std::invalid_argument("strategy: player " + std::to_string(k) +
                                  " sums to " + std::to_string(sum));
    }
    for (double* p = begin; p != end; ++p) *p /= sum;
  }
}

StrategyProfile StrategyProfile::uniform(const std::vector<int>& counts) {
  std::vector<double> data;
  for (int n : counts) data.insert(data.end(), n, 1.0 / n);
  return StrategyProfile(counts, std::move(data));
}

StrategyProfile StrategyProfile::pure(const std::vector<int>& counts,
                                      std::span<const int> actions) {
  if (actions.size() != counts.size()) {
    throw std::invalid_argument("strategy: pure profile size mismatch");
  }
  std::vector<double> data;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (actions[k] < 0 || actions[k] >= counts[k]) {
      throw std::out_of_range("strategy: action index out of range");
    }
    for (int a = 0; a < counts[k]; ++a) data.push_back(a == actions[k] ? 1 : 0);
  }
  return StrategyProfile(counts, std::move(data));
}

// ---------------------------------------------------------------------------
// Game

Game::Game(std::vector<int> action_counts, std::vector<Vector> payoffs,
           std::string name)
    : action_counts_(std::move(action_counts)), payoffs_(std::move(payoffs)),
      name_(std::move(name)) {
  init(false);
}

Game::Game(AllowSingleAction, std::vector<int> action_counts,
           std::vector<Vector> payoffs, std::string name)
    : action_counts_(std::move(action_counts)), payoffs_(std::move(payoffs)),
      name_(std::move(name)) {
  init(true);
}

void Game::init(bool allow_single_action) {
  if (action_counts_.empty()) {
    throw std::invalid_argument("game: at least one player required");
  }
  const int min_actions = allow_single_action ? 1 : 2;
  num_profiles_ = 1;
  for (int n : action_counts_) {
    if (n < min_actions) {
      throw std::invalid_argument("game: every player needs at least " +
                                  std::to_string(min_actions) + " actions");
    }
    num_profiles_ *= static_cast<std::size_t>(n);
  }
  if (payoffs_.size() != action_counts_.size()) {
    throw std::invalid_argument("game: one payoff tensor per player required");
  }
  for (const auto& u : payoffs_) {
    if (u.size() != num_profiles_) {
      throw std::invalid_argument("game: payoff tensor has " +
                                  std::to_string(u.size()) + " entries, expected " +
                                  std::to_string(num_profiles_));
    }
    for (double v : u) {
      if (!std::isfinite(v)) throw std::invalid_argument("game: non-finite payoff");
    }
  }
  strides_.assign(action_counts_.size(), 1);
  for (int k = num_players() - 2; k >= 0; --k) {
    strides_[k] = strides_[k + 1] * action_counts_[k + 1];
  }
  total_actions_ = total_of(action_counts_);
}

double Game::payoff(int k, std::span<const int> profile) const {
  return payoffs_.at(k)[profile_index(profile)];
}

std::size_t Game::profile_index(std::span<const int> profile) const {
  if (static_cast<int>(profile.size()) != num_players()) {
    throw std::invalid_argument("game: profile length mismatch");
  }
  std::size_t idx = 0;
  for (int k = 0; k < num_players(); ++k) {
    if (profile[k] < 0 || profile[k] >= action_counts_[k]) {
      throw std::out_of_range("game: action index out of range");
    }
    idx += strides_[k] * profile[k];
  }
  return idx;
}

std::vector<int> Game::decode_profile(std::size_t index) const {
  std::vector<int> profile(num_players());
  for (int k = 0; k < num_players(); ++k) {
    profile[k] = static_cast<int>((index / strides_[k]) % action_counts_[k]);
  }
  return profile;
}

void Game::check_profile(const FlatProfile& x) const {
  if (x.counts() != action_counts_) {
    throw std::invalid_argument("profile dimensions do not match the game");
  }
}

// ---------------------------------------------------------------------------
// Correlated strategies

CorrelatedStrategy::CorrelatedStrategy(const Game& game,
                                       std::vector<double> joint,
                                       double tolerance)
    : joint_(std::move(joint)) {
  if (joint_.size() != game.num_profiles()) {
    throw std::invalid_argument("correlated strategy: size mismatch");
  }
  double sum = 0.0;
  for (double& p : joint_) {
    if (!std::isfinite(p) || p < -tolerance) {
      throw std::invalid_argument("correlated strategy: negative entry");
    }
    if (p < 0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw std::invalid_argument("correlated strategy: sums to " +
                                std::to_string(sum));
  }
  for (double& p : joint_) p /= sum;
}

CorrelatedStrategy CorrelatedStrategy::product(const Game& game,
                                               const StrategyProfile& x) {
  game.check_profile(x);
  std::vector<double> joint(game.num_profiles());
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    double w = 1.0;
    for (int k = 0; k < game.num_players(); ++k) {
      w *= x[k][(idx / game.stride(k)) % game.num_actions(k)];
    }
    joint[idx] = w;
  }
  return CorrelatedStrategy(game, std::move(joint), 1e-9);
}

Vector CorrelatedStrategy::marginal(const Game& game, int k) const {
  Vector m(game.num_actions(k), 0.0);
  for (std::size_t idx = 0; idx < joint_.size(); ++idx) {
    m[(idx / game.stride(k)) % game.num_actions(k)] += joint_[idx];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Payoffs and equilibria

void payoff_vector(const Game& game, int k, std::span<const double> flat_x,
                   std::span<double> out) {
  if (game.num_profiles() >= kernels::kParallelProfileThreshold) {
    kernels::payoff_vector_parallel(game, k, flat_x, out);
  } else {
    kernels::payoff_vector_serial(game, k, flat_x, out);
  }
}

void all_payoff_vectors(const Game& game, std::span<const double> flat_x,
                        std::span<double> out) {
  if (game.num_profiles() >= kernels::kParallelProfileThreshold) {
    kernels::all_payoff_vectors_parallel(game, flat_x, out);
  } else {
    kernels::all_payoff_vectors_serial(game, flat_x, out);
  }
}

Vector payoff_vector(const Game& game, int k, const StrategyProfile& x) {
  game.check_profile(x);
  if (k < 0 || k >= game.num_players()) {
    throw std::out_of_range("payoff_vector: player index out of range");
  }
  Vector v(game.num_actions(k));
  payoff_vector(game, k, x.flat(), v);
  return v;
}

double expected_payoff(const Game& game, int k, const StrategyProfile& x) {
  const Vector v = payoff_vector(game, k, x);
  auto xk = x[k];
  return std::inner_product(v.begin(), v.end(), xk.begin(), 0.0);
}

NashCheck is_nash(const Game& game, const StrategyProfile& x, double tol) {
  game.check_profile(x);
  NashCheck out;
  out.is_nash = true;
  for (int k = 0; k < game.num_players(); ++k) {
    const Vector v = payoff_vector(game, k, x);
    const double best = *std::max_element(v.begin(), v.end());
    double worst = 0.0;
    for (int a : support(x[k])) worst = std::max(worst, best - v[a]);
    out.max_violation.push_back(worst);
    out.worst_violation = std::max(out.worst_violation, worst);
    if (worst > tol) out.is_nash = false;
  }
  return out;
}

bool is_strict_pure_equilibrium(const Game& game,
                                std::span<const int> actions) {
  const std::size_t idx = game.profile_index(actions);
  for (int k = 0; k < game.num_players(); ++k) {
    const std::size_t base = idx - actions[k] * game.stride(k);
    const double own = game.payoff(k, idx);
    for (int b = 0; b < game.num_actions(k); ++b) {
      if (b == actions[k]) continue;
      if (game.payoff(k, base + b * game.stride(k)) >= own) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dominance

Dominance check_dominance(const Game& game, int k, std::span<const double> p,
                          std::span<const double> p_prime) {
  const int n = game.num_actions(k);
  if (static_cast<int>(p.size()) != n || static_cast<int>(p_prime.size()) != n) {
    throw std::invalid_argument("check_dominance: size mismatch");
  }
  Dominance d;
  d.dominator.assign(p_prime.begin(), p_prime.end());
  d.margin = std::numeric_limits<double>::infinity();
  const auto u = game.payoffs(k);
  const std::size_t stride = game.stride(k);
  for (std::size_t base : opponent_bases(game, k)) {
    double gap = 0.0;
    for (int a = 0; a < n; ++a) gap += (p_prime[a] - p[a]) * u[base + a * stride];
    d.margin = std::min(d.margin, gap);
    if (gap > kDominanceTol) d.strict_profiles.push_back(opponent_actions(game, k, base));
  }
  d.strict = d.margin > kDominanceTol;
  return d;
}

std::vector<Dominance> find_dominated(const Game& game, int k, bool strict) {
  if (k < 0 || k >= game.num_players()) {
    throw std::out_of_range("find_dominated: player index out of range");
  }
  const int n = game.num_actions(k);
  std::vector<Dominance> found;
  if (n < 2) return found;
  const auto u = game.payoffs(k);
  const std::size_t stride = game.stride(k);
  const std::vector<std::size_t> bases = opponent_bases(game, k);
  double umax = -std::numeric_limits<double>::infinity();
  double umin = std::numeric_limits<double>::infinity();
  for (double v : u) {
    umax = std::max(umax, v);
    umin = std::min(umin, v);
  }
  // The margin is shifted by this amount so the LP variable stays >= 0.
  const double shift = (umax - umin) + 1.0;

  for (int alpha = 0; alpha < n; ++alpha) {
    // Variables: p'_0..p'_{n-1}, s = margin + shift.
    lp::Problem prob;
    prob.num_variables = n + 1;
    prob.objective.assign(n + 1, 0.0);
    prob.objective[n] = 1.0;
    for (std::size_t base : bases) {
      lp::Constraint c;
      c.coefficients.resize(n + 1);
      for (int a = 0; a < n; ++a) c.coefficients[a] = u[base + a * stride];
      c.coefficients[n] = -1.0;
      c.relation = lp::Relation::kGreaterEqual;
      c.rhs = u[base + alpha * stride] - shift;
      prob.constraints.push_back(std::move(c));
    }
    lp::Constraint simplex;
    simplex.coefficients.assign(n + 1, 1.0);
    simplex.coefficients[n] = 0.0;
    simplex.relation = lp::Relation::kEqual;
    simplex.rhs = 1.0;
    prob.constraints.push_back(simplex);

    lp::Solution sol = lp::solve(prob);
    if (sol.status != lp::Status::kOptimal) continue;
    Vector p_prime(sol.x.begin(), sol.x.begin() + n);
    Vector pure(n, 0.0);
    pure[alpha] = 1.0;
    Dominance d = check_dominance(game, k, pure, p_prime);
    if (d.strict) {
      d.action = alpha;
      found.push_back(std::move(d));
      continue;
    }
    if (strict) continue;

    // Weak dominance: maximize the total gap subject to every gap >= 0.
    lp::Problem weak;
    weak.num_variables = n;
    weak.objective.assign(n, 0.0);
    for (std::size_t base : bases) {
      lp::Constraint c;
      c.coefficients.resize(n);
      for (int a = 0; a < n; ++a) {
        c.coefficients[a] = u[base + a * stride];
        weak.objective[a] += u[base + a * stride];
      }
      c.relation = lp::Relation::kGreaterEqual;
      c.rhs = u[base + alpha * stride];
      weak.constraints.push_back(std::move(c));
    }
    simplex.coefficients.assign(n, 1.0);
    weak.constraints.push_back(simplex);
    lp::Solution wsol = lp::solve(weak);
    if (wsol.status != lp::Status::kOptimal) continue;
    Dominance w = check_dominance(game, k, pure, wsol.x);
    if (w.margin >= -kDominanceTol && !w.strict_profiles.empty()) {
      w.action = alpha;
      w.margin = std::max(w.margin, 0.0);
      found.push_back(std::move(w));
    }
  }
  return found;
}

Restriction restrict(const Game& game,
                     const std::vector<std::vector<int>>& supports) {
  const int players = game.num_players();
  if (static_cast<int>(supports.size()) != players) {
    throw std::invalid_argument("restrict: one support per player required");
  }
  std::vector<int> counts(players);
  for (int k = 0; k < players; ++k) {
    if (supports[k].empty()) {
      throw std::invalid_argument("restrict: empty support for player " +
                                  std::to_string(k));
    }
    for (int a : supports[k]) {
      if (a < 0 || a >= game.num_actions(k)) {
        throw std::out_of_range("restrict: action index out of range");
      }
    }
    counts[k] = static_cast<int>(supports[k].size());
  }
  std::size_t total = 1;
  for (int n : counts) total *= n;
  std::vector<Vector> payoffs(players, Vector(total));
  std::vector<int> local(players, 0);
  std::vector<int> original(players);
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (int k = 0; k < players; ++k) original[k] = supports[k][local[k]];
    const std::size_t src = game.profile_index(original);
    for (int k = 0; k < players; ++k) payoffs[k][idx] = game.payoff(k, src);
    for (int k = players - 1; k >= 0; --k) {
      if (++local[k] < counts[k]) break;
      local[k] = 0;
    }
  }
  return Restriction{Game(Game::AllowSingleAction{}, counts, std::move(payoffs),
                          game.name()),
                     supports};
}

IteratedElimination iterated_elimination(const Game& game) {
  IteratedElimination out;
  out.survivors.resize(game.num_players());
  for (int k = 0; k < game.num_players(); ++k) {
    out.survivors[k].resize(game.num_actions(k));
    std::iota(out.survivors[k].begin(), out.survivors[k].end(), 0);
  }
  while (true) {
    Restriction r = restrict(game, out.survivors);
    std::vector<EliminationRound> round;
    for (int k = 0; k < r.game.num_players(); ++k) {
      for (const Dominance& d : find_dominated(r.game, k, true)) {
        round.push_back({k, r.index_map[k][d.action], d.margin});
      }
    }
    if (round.empty()) break;
    for (const auto& e : round) {
      auto& s = out.survivors[e.player];
      s.erase(std::find(s.begin(), s.end(), e.action));
    }
    out.rounds.push_back(std::move(round));
  }
  return out;
}

Vector marginal_payoff_vector(const Game& game, int k,
                              const CorrelatedStrategy& chi) {
  if (k < 0 || k >= game.num_players()) {
    throw std::out_of_range("marginal_payoff_vector: player index out of range");
  }
  if (chi.joint().size() != game.num_profiles()) {
    throw std::invalid_argument("marginal_payoff_vector: size mismatch");
  }
  const int n = game.num_actions(k);
  const std::size_t stride = game.stride(k);
  const auto u = game.payoffs(k);
  const auto joint = chi.joint();
  Vector v(n, 0.0);
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    if (joint[idx] == 0.0) continue;
    const std::size_t own = (idx / stride) % n;
    const std::size_t base = idx - own * stride;
    for (int a = 0; a < n; ++a) v[a] += joint[idx] * u[base + a * stride];
  }
  return v;
}

bool is_zero_sum(const Game& game, double tol) {
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx) {
    double sum = 0.0;
    for (int k = 0; k < game.num_players(); ++k) sum += game.payoff(k, idx);
    if (std::abs(sum) > tol) return false;
  }
  return true;
}

double max_abs_payoff(const Game& game) {
  double m = 0.0;
  for (int k = 0; k < game.num_players(); ++k) {
    for (double v : game.payoffs(k)) m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace rlgames
