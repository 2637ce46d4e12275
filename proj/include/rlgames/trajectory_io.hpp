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

#ifndef RLGAMES_TRAJECTORY_IO_HPP_
#define RLGAMES_TRAJECTORY_IO_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "rlgames/dynamics.hpp"
#include "rlgames/game.hpp"

namespace rlgames {

// Writes `content` to a temporary sibling file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

// %.17g, so values survive a text round trip exactly.
std::string format_double(double v);

// Header: t, x_<k>_<a>..., then y_<k>_<a>... when scores are stored, then
// xbar_<k>_<a>... when averages are stored. Indices are 1-based.
std::vector<std::string> trajectory_columns(const Trajectory& traj);
std::string trajectory_csv(const Trajectory& traj);

nlohmann::json run_metadata(const Game& game, const Trajectory& traj);

// Writes `csv_path` and the sidecar `csv_path + ".json"`.
void save_run(const std::string& csv_path, const Game& game,
              const Trajectory& traj);

struct LoadedRun {
  Game game;
  Trajectory trajectory;
  nlohmann::json metadata;
};

// Reads a run written by save_run. Throws std::runtime_error when the file
// cannot be read and std::invalid_argument when the CSV does not match its
// metadata.
LoadedRun load_run(const std::string& csv_path);

}  // namespace rlgames

#endif  // RLGAMES_TRAJECTORY_IO_HPP_
