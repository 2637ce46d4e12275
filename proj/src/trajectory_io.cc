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

#include "rlgames/trajectory_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "rlgames/game_io.hpp"

namespace rlgames {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid()) + "." +
                          std::to_string(std::hash<std::string>{}(content) & 0xffff);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into '" + path + "': " + ec.message());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> trajectory_columns(const Trajectory& traj) {
  std::vector<std::string> cols{"t"};
  auto add = [&](const char* prefix) {
    for (std::size_t k = 0; k < traj.counts().size(); ++k) {
      for (int a = 0; a < traj.counts()[k]; ++a) {
        cols.push_back(std::string(prefix) + "_" + std::to_string(k + 1) + "_" +
                       std::to_string(a + 1));
      }
    }
  };
  add("x");
  if (traj.has_scores()) add("y");
  if (traj.has_averages()) add("xbar");
  return cols;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out;
  const auto cols = trajectory_columns(traj);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out += ',';
    out += cols[c];
  }
  out += '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out += format_double(traj.time(i));
    auto emit = [&](std::span<const double> row) {
      for (double v : row) {
        out += ',';
        out += format_double(v);
      }
    };
    emit(traj.x(i));
    if (traj.has_scores()) emit(traj.y(i));
    if (traj.has_averages()) emit(traj.average(i));
    out += '\n';
  }
  return out;
}

nlohmann::json run_metadata(const Game& game, const Trajectory& traj) {
  nlohmann::json j;
  j["game"] = game_to_json(game);
  j["game_name"] = game.name();
  j["game_hash"] = game_hash_hex(game);
  j["spec"] = traj.spec.to_json();
  j["dt"] = traj.dt;
  j["T"] = traj.horizon;
  j["integrator"] = traj.integrator;
  j["columns"] = trajectory_columns(traj);
  j["rows"] = traj.size();
  j["has_y"] = traj.has_scores();
  j["has_averages"] = traj.has_averages();
  j["extended_solution_mode"] = traj.spec.extended_solution_mode();
  nlohmann::json support = nlohmann::json::array();
  for (const auto& e : traj.support_events) {
    support.push_back({{"t", e.t}, {"player", e.player + 1}, {"action", e.action + 1}});
  }
  j["support_events"] = std::move(support);
  nlohmann::json selection = nlohmann::json::array();
  for (const auto& e : traj.selection_events) {
    std::vector<int> actions;
    for (int a : e.actions) actions.push_back(a + 1);
    selection.push_back({{"t", e.t}, {"player", e.player + 1}, {"actions", actions}});
  }
  j["selection_events"] = std::move(selection);
  if (!traj.final_correlated.empty()) {
    j["final_correlated"] = traj.final_correlated;
    j["max_identity_error"] = traj.max_identity_error;
  }
  return j;
}

void save_run(const std::string& csv_path, const Game& game,
              const Trajectory& traj) {
  write_file_atomic(csv_path, trajectory_csv(traj));
  write_file_atomic(csv_path + ".json", run_metadata(game, traj).dump(2) + "\n");
}

LoadedRun load_run(const std::string& csv_path) {
  std::ifstream meta_in(csv_path + ".json");
  if (!meta_in) {
    throw std::runtime_error("cannot open metadata '" + csv_path + ".json'");
  }
  nlohmann::json meta;
  try {
    meta_in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad metadata: " + std::string(e.what()));
  }
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open trajectory '" + csv_path + "'");

  try {
    Game game = game_from_json(meta.at("game"), meta.value("game_name", ""));
    if (meta.value("game_hash", "") != game_hash_hex(game)) {
      throw std::invalid_argument("metadata game hash does not match its game");
    }
    const bool has_y = meta.at("has_y").get<bool>();
    Trajectory traj(game.action_counts(), has_y);
    traj.spec = DynamicsSpec::from_json(meta.at("spec"));
    traj.integrator = meta.at("integrator").get<std::string>();
    traj.dt = meta.at("dt").get<double>();
    traj.horizon = meta.at("T").get<double>();
    const auto columns = meta.at("columns").get<std::vector<std::string>>();
    const bool has_avg = meta.value("has_averages", false);

    std::string line;
    if (!std::getline(in, line) || split(line, ',') != columns) {
      throw std::invalid_argument("trajectory header does not match metadata");
    }
    const int width = game.total_actions();
    const std::size_t expected = 1 + width * (1 + (has_y ? 1 : 0) + (has_avg ? 1 : 0));
    if (columns.size() != expected) {
      throw std::invalid_argument("metadata columns do not match the game");
    }
    std::vector<double> row(expected);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split(line, ',');
      if (cells.size() != expected) {
        throw std::invalid_argument("trajectory row " + std::to_string(rows + 1) +
                                    " has " + std::to_string(cells.size()) +
                                    " fields, expected " + std::to_string(expected));
      }
      for (std::size_t c = 0; c < expected; ++c) {
        char* end = nullptr;
        row[c] = std::strtod(cells[c].c_str(), &end);
        if (end == cells[c].c_str() || *end != '\0') {
          throw std::invalid_argument("trajectory: bad number '" + cells[c] + "'");
        }
      }
      std::span<const double> r(row);
      traj.append(r[0], r.subspan(1, width),
                  has_y ? r.subspan(1 + width, width) : std::span<const double>{},
                  has_avg ? r.subspan(1 + width * (has_y ? 2 : 1), width)
                          : std::span<const double>{});
      ++rows;
    }
    if (rows != meta.at("rows").get<std::size_t>()) {
      throw std::invalid_argument("trajectory has " + std::to_string(rows) +
                                  " rows, metadata says " +
                                  std::to_string(meta.at("rows").get<std::size_t>()));
    }
    for (const auto& e : meta.value("support_events", nlohmann::json::array())) {
      traj.support_events.push_back({e.at("t").get<double>(),
                                     e.at("player").get<int>() - 1,
                                     e.at("action").get<int>() - 1});
    }
    for (const auto& e : meta.value("selection_events", nlohmann::json::array())) {
      std::vector<int> actions;
      for (int a : e.at("actions").get<std::vector<int>>()) actions.push_back(a - 1);
      traj.selection_events.push_back(
          {e.at("t").get<double>(), e.at("player").get<int>() - 1, actions});
    }
    if (meta.contains("final_correlated")) {
      traj.final_correlated = meta["final_correlated"].get<std::vector<double>>();
      traj.max_identity_error = meta.value("max_identity_error", 0.0);
    }
    return LoadedRun{std::move(game), std::move(traj), std::move(meta)};
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad metadata: " + std::string(e.what()));
  }
}

}  // namespace rlgames
