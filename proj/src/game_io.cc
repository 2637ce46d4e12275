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

#include "rlgames/game_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace rlgames {
namespace {

struct Builtin {
  const char* description;
  std::vector<int> actions;
  std::vector<Vector> payoffs;
};

const std::map<std::string, Builtin>& builtins() {
  static const std::map<std::string, Builtin> table = {
      {"matching_pennies",
       {"2x2 zero-sum, unique interior equilibrium",
        {2, 2},
        {{1, -1, -1, 1}, {-1, 1, 1, -1}}}},
      {"rps",
       {"rock-paper-scissors, win 1 / lose -1 / tie 0",
        {3, 3},
        {{0, -1, 1, 1, 0, -1, -1, 1, 0}, {0, 1, -1, -1, 0, 1, 1, -1, 0}}}},
      {"coord2",
       {"2x2 coordination, diagonal 1, off-diagonal 0",
        {2, 2},
        {{1, 0, 0, 1}, {1, 0, 0, 1}}}},
      {"dominated2",
       {"player 1 action 2 strictly dominated with constant gap 1",
        {2, 2},
        {{1, 1, 0, 0}, {0, 0, 0, 0}}}},
      {"weak_dominance",
       {"player 1 rows (1,1) vs (1,0); player 2 prefers column 1",
        {2, 2},
        {{1, 1, 1, 0}, {1, 0, 1, 0}}}},
      {"dominance_solvable3",
       {"3x3 game solved by iterated strict dominance",
        {3, 3},
        {{4, 3, 5, 5, 4, 6, 3, 2, 4}, {3, 2, 1, 4, 3, 2, 1, 0, 5}}}},
  };
  return table;
}

}  // namespace

nlohmann::json game_to_json(const Game& game) {
  nlohmann::json j;
  j["players"] = game.num_players();
  j["actions"] = game.action_counts();
  nlohmann::json payoffs = nlohmann::json::array();
  for (int k = 0; k < game.num_players(); ++k) {
    auto u = game.payoffs(k);
    payoffs.push_back(std::vector<double>(u.begin(), u.end()));
  }
  j["payoffs"] = std::move(payoffs);
  return j;
}

Game game_from_json(const nlohmann::json& j, std::string name) {
  try {
    const int players = j.at("players").get<int>();
    auto actions = j.at("actions").get<std::vector<int>>();
    auto payoffs = j.at("payoffs").get<std::vector<Vector>>();
    if (static_cast<int>(actions.size()) != players) {
      throw std::invalid_argument("game json: 'actions' length != 'players'");
    }
    if (name.empty() && j.contains("name")) name = j["name"].get<std::string>();
    return Game(std::move(actions), std::move(payoffs), std::move(name));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("game json: ") + e.what());
  }
}

std::vector<std::string> builtin_game_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : builtins()) names.push_back(name);
  return names;
}

Game builtin_game(const std::string& name) {
  auto it = builtins().find(name);
  if (it == builtins().end()) {
    throw std::invalid_argument("unknown builtin game '" + name + "'");
  }
  return Game(it->second.actions, it->second.payoffs, name);
}

std::string builtin_game_description(const std::string& name) {
  auto it = builtins().find(name);
  return it == builtins().end() ? std::string() : it->second.description;
}

Game load_game(const std::string& source) {
  if (builtins().count(source)) return builtin_game(source);
  std::ifstream in(source);
  if (!in) throw std::runtime_error("cannot open game file '" + source + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("game file '" + source + "': " + e.what());
  }
  return game_from_json(j, source);
}

std::uint64_t game_hash(const Game& game) {
  const std::string dump = game_to_json(game).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string game_hash_hex(const Game& game) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(game_hash(game)));
  return buf;
}

}  // namespace rlgames
