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

#ifndef RLGAMES_CLI_HPP_
#define RLGAMES_CLI_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlgames/dynamics.hpp"
#include "rlgames/game.hpp"

namespace rlgames::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;

// Everything needed to reproduce one run. Loadable from JSON with the same
// keys as the command-line options.
struct RunConfig {
  std::string game = "matching_pennies";
  // One entry for all players or one per player.
  std::vector<std::string> penalties = {"gibbs"};
  std::string variant = "rl";
  std::string field = "replicator";
  double q = 1.0;        // field exponent for qreplicator/renyi fields
  double lambda = 1.0;   // discount factor
  std::string tie = "lowest";
  double warmup = 1.0;
  std::vector<double> gamma;  // empty: all ones; one entry: shared
  // Initial condition: exactly one of y0/x0, or `init` = zeros|uniform.
  std::vector<double> y0;
  std::vector<double> x0;
  std::string init;
  double horizon = 10.0;
  double dt = 1e-3;
  int stride = 1;
  std::string out = "trajectory.csv";

  nlohmann::json to_json() const;
  // Keys missing from `j` keep their current values.
  void merge_json(const nlohmann::json& j);
};

// Penalty strings expanded to one per player.
std::vector<Penalty> resolve_penalties(const RunConfig& config, int players);
DynamicsSpec resolve_spec(const RunConfig& config, const Game& game);

// Runs the configured integration without writing anything.
Trajectory simulate(const RunConfig& config, const Game& game);

// Entry point. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace rlgames::cli

#endif  // RLGAMES_CLI_HPP_
