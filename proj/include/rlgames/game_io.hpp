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

#ifndef RLGAMES_GAME_IO_HPP_
#define RLGAMES_GAME_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlgames/game.hpp"

namespace rlgames {

// {"players": N, "actions": [n_1, ...], "payoffs": [[...u_1...], ...]}
nlohmann::json game_to_json(const Game& game);
Game game_from_json(const nlohmann::json& j, std::string name = {});

// Names accepted by builtin_game().
std::vector<std::string> builtin_game_names();
// Throws std::invalid_argument for unknown names.
Game builtin_game(const std::string& name);
std::string builtin_game_description(const std::string& name);

// Builtin name or path to a JSON file.
Game load_game(const std::string& source);

// FNV-1a over the canonical JSON dump; stable across runs.
std::uint64_t game_hash(const Game& game);
std::string game_hash_hex(const Game& game);

}  // namespace rlgames

#endif  // RLGAMES_GAME_IO_HPP_
