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

#ifndef RLGAMES_GAME_HPP_
#define RLGAMES_GAME_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rlgames {

using Vector = std::vector<double>;

// Strategies with probability at or below this are treated as unplayed.
inline constexpr double kSupportThreshold = 1e-9;

// Indices of entries strictly above `threshold`.
std::vector<int> support(std::span<const double> x,
                         double threshold = kSupportThreshold);

struct Restriction;
class Game;
Restriction restrict(const Game& game,
                     const std::vector<std::vector<int>>& supports);

// Per-player vectors stored contiguously, player 0 first.
class FlatProfile {
 public:
  FlatProfile() = default;
  explicit FlatProfile(std::vector<int> counts, double fill = 0.0);
  FlatProfile(std::vector<int> counts, std::vector<double> data);
  explicit FlatProfile(const std::vector<Vector>& per_player);

  int num_players() const { return static_cast<int>(counts_.size()); }
  int size(int k) const { return counts_[k]; }
  int total_size() const { return static_cast<int>(data_.size()); }
  const std::vector<int>& counts() const { return counts_; }
  int offset(int k) const { return offsets_[k]; }

  std::span<const double> operator[](int k) const {
    return {data_.data() + offsets_[k], static_cast<std::size_t>(counts_[k])};
  }
  std::span<const double> flat() const { return data_; }
  std::vector<Vector> to_vectors() const;

 protected:
  std::vector<int> counts_;
  std::vector<int> offsets_;
  std::vector<double> data_;
};

// Dual variables y = (y_1, ..., y_N); unconstrained but finite.
class ScoreProfile : public FlatProfile {
 public:
  using FlatProfile::FlatProfile;
  using FlatProfile::operator[];

  std::span<double> operator[](int k) {
    return {data_.data() + offsets_[k], static_cast<std::size_t>(counts_[k])};
  }
  std::span<double> mutable_flat() { return data_; }
};

// Mixed strategy profile. Construction rejects negative entries and sums
// further than `tolerance` from one, then renormalizes each player exactly.
class StrategyProfile : public FlatProfile {
 public:
  StrategyProfile() = default;
  explicit StrategyProfile(const std::vector<Vector>& per_player,
                           double tolerance = 1e-9);
  StrategyProfile(std::vector<int> counts, std::vector<double> data,
                  double tolerance = 1e-9);

  static StrategyProfile uniform(const std::vector<int>& counts);
  static StrategyProfile pure(const std::vector<int>& counts,
                              std::span<const int> actions);

 private:
  void validate_and_normalize(double tolerance);
};

// Normal-form game. Payoff tensors are flattened row-major with player 0's
// action index varying slowest.
class Game {
 public:
  // Rejects fewer than one player, players with fewer than two actions, and
  // tensors of the wrong size or with non-finite entries.
  Game(std::vector<int> action_counts, std::vector<Vector> payoffs,
       std::string name = {});

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int num_actions(int k) const { return action_counts_[k]; }
  const std::vector<int>& action_counts() const { return action_counts_; }
  int total_actions() const { return total_actions_; }
  std::size_t num_profiles() const { return num_profiles_; }
  std::size_t stride(int k) const { return strides_[k]; }
  const std::string& name() const { return name_; }

  std::span<const double> payoffs(int k) const { return payoffs_[k]; }
  double payoff(int k, std::size_t profile_index) const {
    return payoffs_[k][profile_index];
  }
  double payoff(int k, std::span<const int> profile) const;

  std::size_t profile_index(std::span<const int> profile) const;
  std::vector<int> decode_profile(std::size_t index) const;

  // Throws std::invalid_argument if `x` does not match the action counts.
  void check_profile(const FlatProfile& x) const;

 private:
  struct AllowSingleAction {};
  Game(AllowSingleAction, std::vector<int> action_counts,
       std::vector<Vector> payoffs, std::string name);
  void init(bool allow_single_action);

  friend Restriction restrict(const Game& game,
                              const std::vector<std::vector<int>>& supports);

  std::vector<int> action_counts_;
  std::vector<Vector> payoffs_;
  std::string name_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 0;
  int total_actions_ = 0;
};

// Joint distribution over pure profiles, same flattening as the payoffs.
class CorrelatedStrategy {
 public:
  CorrelatedStrategy() = default;
  CorrelatedStrategy(const Game& game, std::vector<double> joint,
                     double tolerance = 1e-12);

  static CorrelatedStrategy product(const Game& game,
                                    const StrategyProfile& x);

  std::span<const double> joint() const { return joint_; }
  // Marginal distribution of player k.
  Vector marginal(const Game& game, int k) const;

 private:
  std::vector<double> joint_;
};

// v_k(x): payoff of each pure strategy of player k against x_{-k}.
Vector payoff_vector(const Game& game, int k, const StrategyProfile& x);
// Unvalidated form over a flat profile; used on hot paths.
void payoff_vector(const Game& game, int k, std::span<const double> flat_x,
                   std::span<double> out);

// All players' payoff vectors, laid out like `flat_x`.
void all_payoff_vectors(const Game& game, std::span<const double> flat_x,
                        std::span<double> out);

double expected_payoff(const Game& game, int k, const StrategyProfile& x);

struct NashCheck {
  bool is_nash = false;
  // Per player: max over a in supp(x_k), b of v_kb(x) - v_ka(x), floored at 0.
  std::vector<double> max_violation;
  double worst_violation = 0.0;
};

NashCheck is_nash(const Game& game, const StrategyProfile& x, double tol);

// True if every player has a unique best reply at the pure profile and it is
// the profile's own action.
bool is_strict_pure_equilibrium(const Game& game,
                                std::span<const int> actions);

struct Dominance {
  int action = 0;
  Vector dominator;  // mixed strategy of the same player
  double margin = 0.0;  // min over opponent pure profiles of the payoff gap
  bool strict = false;
  // Opponent pure profiles (actions of the other players, in player order)
  // where the gap is strictly positive.
  std::vector<std::vector<int>> strict_profiles;
};

// Pure strategies of player k dominated by some mixed strategy. With
// strict = false, weakly dominated strategies are reported as well.
std::vector<Dominance> find_dominated(const Game& game, int k, bool strict);

// Checks p <= p' (weak) by direct enumeration of opponent pure profiles.
// Returns the witnessing strict profiles; empty `strict_profiles` and
// `margin < 0` signal that the relation fails.
Dominance check_dominance(const Game& game, int k, std::span<const double> p,
                          std::span<const double> p_prime);

struct Restriction {
  Game game;
  // index_map[k][i] is the original index of restricted action i.
  std::vector<std::vector<int>> index_map;
};

Restriction restrict(const Game& game,
                     const std::vector<std::vector<int>>& supports);

struct EliminationRound {
  int player = 0;
  int action = 0;  // original index
  double margin = 0.0;
};

struct IteratedElimination {
  std::vector<std::vector<int>> survivors;  // original indices
  std::vector<std::vector<EliminationRound>> rounds;
};

// Iterated removal of strictly dominated (by mixed strategies) actions.
IteratedElimination iterated_elimination(const Game& game);

// v^c_k(chi): payoffs of player k against the opponents' marginal of chi.
Vector marginal_payoff_vector(const Game& game, int k,
                              const CorrelatedStrategy& chi);

bool is_zero_sum(const Game& game, double tol = 1e-12);

double max_abs_payoff(const Game& game);

}  // namespace rlgames

#endif  // RLGAMES_GAME_HPP_
