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

#include "rlgames/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "rlgames/analysis.hpp"
#include "rlgames/choice.hpp"
#include "rlgames/game_io.hpp"
#include "rlgames/trajectory_io.hpp"

namespace rlgames::cli {
namespace {

// Usage errors detected after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    parts.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return parts;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("not a number: '" + s + "'");
  }
  return v;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const auto& part : split(s)) out.push_back(parse_number(part));
  return out;
}

std::vector<int> parse_indices(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_numbers(s)) {
    if (v != std::floor(v) || v < 1) throw UsageError("indices are 1-based integers");
    out.push_back(static_cast<int>(v) - 1);
  }
  return out;
}

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Splits a flat vector into per-player pieces.
std::vector<Vector> per_player(const Game& game, const std::vector<double>& flat,
                               const char* what) {
  if (static_cast<int>(flat.size()) != game.total_actions()) {
    throw UsageError(std::string(what) + " needs " +
                     std::to_string(game.total_actions()) + " entries, got " +
                     std::to_string(flat.size()));
  }
  std::vector<Vector> out;
  std::size_t pos = 0;
  for (int k = 0; k < game.num_players(); ++k) {
    out.emplace_back(flat.begin() + pos, flat.begin() + pos + game.num_actions(k));
    pos += game.num_actions(k);
  }
  return out;
}

ScoreProfile score_profile(const Game& game, std::vector<double> flat) {
  per_player(game, flat, "y0");
  return ScoreProfile(game.action_counts(), std::move(flat));
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["game"] = game;
  j["penalty"] = penalties;
  j["variant"] = variant;
  j["field"] = field;
  j["q"] = q;
  j["lambda"] = lambda;
  j["tie"] = tie;
  j["warmup"] = warmup;
  j["gamma"] = gamma;
  if (!y0.empty()) j["y0"] = y0;
  if (!x0.empty()) j["x0"] = x0;
  if (!init.empty()) j["init"] = init;
  j["T"] = horizon;
  j["dt"] = dt;
  j["stride"] = stride;
  j["out"] = out;
  return j;
}

void RunConfig::merge_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "game", "penalty", "variant", "field", "q",  "lambda", "tie",    "warmup",
      "gamma", "y0",     "x0",      "init",  "T",  "dt",     "stride", "out"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  if (j.contains("y0") && j.contains("x0")) throw UsageError("config has both y0 and x0");
  try {
    auto string_or_list = [&](const char* key, std::vector<std::string>& dst) {
      if (!j.contains(key)) return;
      if (j[key].is_string()) {
        dst = split(j[key].get<std::string>());
      } else {
        dst = j[key].get<std::vector<std::string>>();
      }
    };
    auto number_or_list = [&](const char* key, std::vector<double>& dst) {
      if (!j.contains(key)) return;
      if (j[key].is_number()) {
        dst = {j[key].get<double>()};
      } else {
        dst = j[key].get<std::vector<double>>();
      }
    };
    if (j.contains("game")) game = j["game"].get<std::string>();
    string_or_list("penalty", penalties);
    if (j.contains("variant")) variant = j["variant"].get<std::string>();
    if (j.contains("field")) field = j["field"].get<std::string>();
    if (j.contains("q")) q = j["q"].get<double>();
    if (j.contains("lambda")) lambda = j["lambda"].get<double>();
    if (j.contains("tie")) tie = j["tie"].get<std::string>();
    if (j.contains("warmup")) warmup = j["warmup"].get<double>();
    number_or_list("gamma", gamma);
    for (const char* key : {"y0", "x0"}) {
      if (!j.contains(key)) continue;
      if (j[key].is_string()) {
        init = j[key].get<std::string>();
      } else {
        (std::string(key) == "y0" ? y0 : x0) = j[key].get<std::vector<double>>();
      }
    }
    if (j.contains("init")) init = j["init"].get<std::string>();
    if (j.contains("T")) horizon = j["T"].get<double>();
    if (j.contains("dt")) dt = j["dt"].get<double>();
    if (j.contains("stride")) stride = j["stride"].get<int>();
    if (j.contains("out")) out = j["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
}

std::vector<Penalty> resolve_penalties(const RunConfig& config, int players) {
  std::vector<Penalty> out;
  if (config.penalties.size() == 1) {
    out.assign(players, Penalty::parse(config.penalties.front()));
  } else if (static_cast<int>(config.penalties.size()) == players) {
    for (const auto& s : config.penalties) out.push_back(Penalty::parse(s));
  } else {
    throw UsageError("expected 1 or " + std::to_string(players) +
                     " penalties, got " + std::to_string(config.penalties.size()));
  }
  return out;
}

DynamicsSpec resolve_spec(const RunConfig& config, const Game& game) {
  DynamicsSpec spec;
  spec.variant = parse_variant(config.variant);
  spec.field = parse_field_kind(config.field);
  spec.field_q = config.q;
  spec.discount = config.lambda;
  spec.tie = parse_tie_rule(config.tie);
  spec.warmup = config.warmup;
  const int players = game.num_players();
  if (config.gamma.size() == 1) {
    spec.rates.assign(players, config.gamma.front());
  } else if (!config.gamma.empty()) {
    if (static_cast<int>(config.gamma.size()) != players) {
      throw UsageError("expected 1 or " + std::to_string(players) + " rates");
    }
    spec.rates = config.gamma;
  }
  if (!config.penalties.empty()) spec.penalties = resolve_penalties(config, players);
  spec.validate(game);
  return spec;
}

Trajectory simulate(const RunConfig& config, const Game& game) {
  if (!config.y0.empty() && !config.x0.empty()) {
    throw UsageError("give at most one of y0 and x0");
  }
  if (!config.init.empty() && config.init != "zeros" && config.init != "uniform") {
    throw UsageError("init must be 'zeros' or 'uniform'");
  }
  if (!config.init.empty() && (!config.y0.empty() || !config.x0.empty())) {
    throw UsageError("init conflicts with an explicit y0/x0");
  }
  const DynamicsSpec spec = resolve_spec(config, game);
  IntegrationOptions opts;
  opts.horizon = config.horizon;
  opts.dt = config.dt;
  opts.stride = config.stride;
  const int players = game.num_players();

  switch (spec.variant) {
    case Variant::kUnpenalized: {
      if (!config.x0.empty()) {
        throw UsageError("the unpenalized variant starts from scores; use y0");
      }
      if (!config.y0.empty()) {
        return integrate(game, spec, score_profile(game, config.y0), opts);
      }
      if (config.init == "zeros") {
        return integrate(game, spec, ScoreProfile(game.action_counts()), opts);
      }
      return integrate_unpenalized(game, spec, std::nullopt, opts);
    }
    case Variant::kDirectField:
    case Variant::kCrossBS: {
      if (!config.x0.empty()) {
        return integrate(game, spec, StrategyProfile(per_player(game, config.x0, "x0")),
                         opts);
      }
      if (!config.y0.empty()) {
        if (spec.penalties.empty()) throw UsageError("y0 needs a penalty to map to x0");
        const auto ys = per_player(game, config.y0, "y0");
        std::vector<Vector> xs;
        for (int k = 0; k < players; ++k) xs.push_back(choice_map(spec.penalties[k], ys[k]));
        return integrate(game, spec, StrategyProfile(xs), opts);
      }
      return integrate(game, spec, StrategyProfile::uniform(game.action_counts()), opts);
    }
    case Variant::kErevRoth: {
      if (!config.y0.empty()) return integrate(game, spec, score_profile(game, config.y0), opts);
      if (!config.x0.empty()) {
        per_player(game, config.x0, "x0");
        return integrate(game, spec, ScoreProfile(game.action_counts(), config.x0), opts);
      }
      return integrate(game, spec, ScoreProfile(game.action_counts(), 1.0), opts);
    }
    default:
      break;
  }
  if (!config.y0.empty()) return integrate(game, spec, score_profile(game, config.y0), opts);
  ScoreProfile y0(game.action_counts());
  if (!config.x0.empty()) {
    const auto xs = per_player(game, config.x0, "x0");
    // Validates the simplex constraint before inverting.
    StrategyProfile check(xs);
    for (int k = 0; k < players; ++k) {
      const Vector yk = inverse_choice(spec.penalties[k], check[k]);
      const double scale = spec.variant == Variant::kNoiseLevel ? spec.rate(k) : 1.0;
      for (int a = 0; a < game.num_actions(k); ++a) y0[k][a] = yk[a] / scale;
    }
  }
  return integrate(game, spec, y0, opts);
}

namespace {

// ---------------------------------------------------------------------------
// Shared run options

struct RunOptions {
  std::string config_path;
  std::string game, penalty, variant, field, tie, gamma, y0, x0, init, out;
  double q = 1.0, lambda = 1.0, warmup = 1.0, horizon = 0.0, dt = 0.0;
  int stride = 1;
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

void add_run_options(CLI::App* app, RunOptions& o, bool with_out) {
  auto add = [&](const std::string& key, CLI::Option* opt) {
    o.options.emplace_back(key, opt);
  };
  app->add_option("--config", o.config_path, "JSON file with run settings");
  add("game", app->add_option("--game", o.game, "builtin game name or JSON file"));
  add("penalty", app->add_option("--penalty", o.penalty,
                                 "gibbs|quad|tsallis:<q>|renyi:<q>|logbar, "
                                 "comma-separated for one per player"));
  add("variant", app->add_option("--variant", o.variant,
                                 "rl|discounted|noise|erev-roth|cross|url|direct"));
  add("field", app->add_option("--field", o.field,
                               "generic|replicator|projection|qreplicator|renyi|logbarrier"));
  add("q", app->add_option("--q", o.q, "exponent of the qreplicator/renyi fields"));
  add("lambda", app->add_option("--lambda", o.lambda, "discount factor in (0,1]"));
  add("tie", app->add_option("--tie", o.tie, "lowest|uniform"));
  add("warmup", app->add_option("--warmup", o.warmup, "warm-up length of the url variant"));
  add("gamma", app->add_option("--gamma", o.gamma, "learning rates, one or per player"));
  add("y0", app->add_option("--y0", o.y0, "initial scores (CSV), or zeros|uniform"));
  add("x0", app->add_option("--x0", o.x0, "initial strategies (CSV), or zeros|uniform"));
  add("init", app->add_option("--init", o.init, "zeros|uniform"));
  add("T", app->add_option("--T", o.horizon, "horizon"));
  add("dt", app->add_option("--dt", o.dt, "step size"));
  add("stride", app->add_option("--stride", o.stride, "store every n-th step"));
  if (with_out) add("out", app->add_option("--out", o.out, "trajectory CSV path"));
}

RunConfig build_config(const RunOptions& o) {
  RunConfig c;
  if (!o.config_path.empty()) c.merge_json(read_json_file(o.config_path));
  auto given = [&](const std::string& name) {
    return std::any_of(o.options.begin(), o.options.end(),
                       [&](const auto& kv) { return kv.first == name && kv.second->count() > 0; });
  };
  if (given("y0") && given("x0")) {
    throw UsageError("give at most one of --y0 and --x0");
  }
  for (const auto& [key, opt] : o.options) {
    if (opt->count() == 0) continue;
    if (key == "game") c.game = o.game;
    else if (key == "penalty") c.penalties = split(o.penalty);
    else if (key == "variant") c.variant = o.variant;
    else if (key == "field") c.field = o.field;
    else if (key == "q") c.q = o.q;
    else if (key == "lambda") c.lambda = o.lambda;
    else if (key == "tie") c.tie = o.tie;
    else if (key == "warmup") c.warmup = o.warmup;
    else if (key == "gamma") c.gamma = parse_numbers(o.gamma);
    else if (key == "y0" || key == "x0") {
      const std::string& v = key == "y0" ? o.y0 : o.x0;
      if (v == "zeros" || v == "uniform") {
        c.init = v;
        c.y0.clear();
        c.x0.clear();
      } else {
        (key == "y0" ? c.y0 : c.x0) = parse_numbers(v);
        (key == "y0" ? c.x0 : c.y0).clear();
        c.init.clear();
      }
    } else if (key == "init") c.init = o.init;
    else if (key == "T") c.horizon = o.horizon;
    else if (key == "dt") c.dt = o.dt;
    else if (key == "stride") c.stride = o.stride;
    else if (key == "out") c.out = o.out;
  }
  return c;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const RunOptions& o, std::ostream& out) {
  const RunConfig config = build_config(o);
  const Game game = load_game(config.game);
  const Trajectory traj = simulate(config, game);
  save_run(config.out, game, traj);
  out << "wrote " << traj.size() << " rows to " << config.out << "\n";
  out << "final x: " << join(traj.x(traj.size() - 1)) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::string path;
  std::vector<std::string> checks;
  int player = 1;
  int action = 0;  // 1-based; 0 means unset
  std::string p, p_prime, profile, report, fit_window, check_window;
  double tol = -1.0;
  double threshold = kSupportThreshold;
  double epsilon = 0.1;
  double radius = 0.05;
  double min_duration = 100.0;
};

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "conservation", "time-average", "extinction", "envelope",
      "strict",       "spread",       "tracking",   "stationarity",
      "derivative",   "weak-dominance", "selection"};
  return names;
}

std::pair<double, double> parse_window(const std::string& s, double lo, double hi) {
  if (s.empty()) return {lo, hi};
  const auto v = parse_numbers(s);
  if (v.size() != 2 || !(v[0] <= v[1])) throw UsageError("window must be 'begin,end'");
  return {v[0], v[1]};
}

CheckResult run_check(const std::string& name, const AnalyzeOptions& a,
                      const LoadedRun& run) {
  const Game& game = run.game;
  const Trajectory& traj = run.trajectory;
  const DynamicsSpec& spec = traj.spec;
  const int k = a.player - 1;
  if (k < 0 || k >= game.num_players()) throw UsageError("--player out of range");
  auto need_action = [&] {
    if (a.action < 1 || a.action > game.num_actions(k)) {
      throw UsageError("check '" + name + "' needs a valid --action");
    }
    return a.action - 1;
  };
  auto profile_or_uniform = [&](const std::string& s) {
    if (s.empty()) return StrategyProfile::uniform(game.action_counts());
    return StrategyProfile(per_player(game, parse_numbers(s), "--p"));
  };
  auto need_penalties = [&] {
    if (spec.penalties.empty()) {
      throw UnsupportedOperation("check '" + name + "' needs the run's penalties");
    }
    return spec.penalties;
  };
  auto tol_or = [&](double d) { return a.tol >= 0 ? a.tol : d; };

  CheckResult r;
  r.name = name;
  if (name == "conservation") {
    const auto rep = zero_sum_conservation(traj, game, need_penalties(),
                                           profile_or_uniform(a.p));
    r.value = rep.max_drift;
    r.tolerance = tol_or(1e-6);
    r.passed = r.value <= r.tolerance;
    r.detail = "max |F(t) - F(0)|";
    r.data = {{"initial", rep.initial}};
  } else if (name == "time-average") {
    const Trajectory avg = time_average(traj);
    const auto target = profile_or_uniform(a.p);
    r.value = sup_distance(avg.x(avg.size() - 1), target.flat());
    r.tolerance = tol_or(1e-2);
    r.passed = r.value <= r.tolerance;
    r.detail = "sup distance of the final time average";
    r.data = {{"final_average", std::vector<double>(avg.x(avg.size() - 1).begin(),
                                                    avg.x(avg.size() - 1).end())}};
  } else if (name == "extinction") {
    const int act = need_action();
    const auto rep = extinction_report(traj, k, act, a.threshold);
    r.passed = rep.extinct;
    r.value = rep.first_time.value_or(std::nan(""));
    r.tolerance = a.threshold;
    r.detail = rep.extinct ? "extinct from t = first time" : "not extinct";
  } else if (name == "envelope") {
    const int act = need_action();
    const auto penalties = need_penalties();
    std::optional<Vector> dominator;
    double delta = 0.0;
    for (const auto& d : find_dominated(game, k, true)) {
      if (d.action == act) {
        dominator = d.dominator;
        delta = d.margin;
      }
    }
    if (!dominator) throw UsageError("action is not strictly dominated");
    EnvelopeOptions eo;
    std::tie(eo.fit_begin, eo.fit_end) =
        parse_window(a.fit_window, 0.0, std::numeric_limits<double>::infinity());
    std::tie(eo.check_begin, eo.check_end) =
        parse_window(a.check_window, 0.0, std::numeric_limits<double>::infinity());
    eo.slack = a.threshold;
    const auto fit = rate_envelope_check(traj, k, act, penalties[k], spec.rate(k),
                                         delta, eo, dominator);
    r.value = fit.violations;
    r.tolerance = 0;
    r.passed = fit.violations == 0;
    r.detail = "envelope violations after fitting c";
    r.data = {{"c_fit", std::isfinite(fit.c_fit) ? nlohmann::json(fit.c_fit) : nullptr},
              {"delta", delta},
              {"samples", fit.samples_checked}};
    if (fit.c_theory) {
      r.data["c_theory"] = *fit.c_theory;
      r.data["theory_holds"] = fit.theory_holds;
    }
  } else if (name == "strict") {
    if (a.profile.empty()) throw UsageError("check 'strict' needs --profile");
    const auto target = parse_indices(a.profile);
    StrictConvergenceOptions so;
    so.epsilon = a.epsilon;
    so.tolerance = tol_or(1e-6);
    std::tie(so.envelope.fit_begin, so.envelope.fit_end) =
        parse_window(a.fit_window, 0.0, std::numeric_limits<double>::infinity());
    std::tie(so.envelope.check_begin, so.envelope.check_end) =
        parse_window(a.check_window, 0.0, std::numeric_limits<double>::infinity());
    const auto rep =
        strict_convergence_report(traj, game, target, spec.penalties, spec.rates, so);
    r.value = rep.final_residual;
    r.tolerance = so.tolerance;
    r.passed = rep.converged && (!rep.envelope_checked || rep.envelope_ok);
    r.detail = "final residual; envelope violations in data";
    r.data = {{"converged", rep.converged},
              {"envelope_checked", rep.envelope_checked},
              {"envelope_violations", rep.envelope_violations}};
    if (rep.exact_time) r.data["exact_time"] = *rep.exact_time;
  } else if (name == "spread") {
    const auto rep = time_average_payoff_spread(traj, game, spec.rates, tol_or(1e-4));
    r.passed = rep.passed;
    r.value = *std::max_element(rep.spread.begin(), rep.spread.end());
    r.tolerance = *std::min_element(rep.bound.begin(), rep.bound.end());
    r.detail = "payoff spread at the time average vs bound";
    r.data = {{"spread", rep.spread}, {"bound", rep.bound}};
  } else if (name == "tracking") {
    const auto rep = br_tracking_gap(traj, game);
    r.passed = rep.decreasing;
    r.value = rep.late_mean;
    r.tolerance = rep.early_mean;
    r.detail = "late mean gap vs early mean gap";
    r.data = {{"final_gap", rep.final_gap}};
  } else if (name == "stationarity") {
    const auto rep =
        stationarity_check(traj, game, profile_or_uniform(a.p), a.radius, a.min_duration);
    r.passed = !rep.contradiction;
    r.value = rep.duration;
    r.tolerance = a.min_duration;
    r.detail = rep.contradiction ? "stays near a non-equilibrium" : "consistent";
    r.data = {{"center_is_nash", rep.center_is_nash}, {"stays_near", rep.stays_near}};
  } else if (name == "derivative") {
    const auto rep = fenchel_derivative_check(traj, game, need_penalties(), spec.rates,
                                              profile_or_uniform(a.p));
    // Stored spacing, which is dt times the stride.
    const double h = traj.size() > 1 ? traj.time(1) - traj.time(0) : traj.dt;
    r.value = rep.max_error;
    r.tolerance = tol_or(10 * h * h);
    r.passed = r.value <= r.tolerance && rep.max_kink_error <= h;
    r.detail = "max |dF/dt - sum gamma <v, x - p>| off support changes";
    r.data = {{"kink_steps", rep.kink_steps.size()}, {"max_kink_error", rep.max_kink_error}};
  } else if (name == "weak-dominance") {
    if (a.p.empty() || a.p_prime.empty()) {
      throw UsageError("check 'weak-dominance' needs --p and --p-prime for the player");
    }
    const auto rep = weak_dominance_report(traj, game, k, parse_numbers(a.p),
                                           parse_numbers(a.p_prime), a.threshold);
    r.passed = rep.clause != WeakDominanceClause::kInconclusive;
    r.value = rep.dominated_extinct ? 1 : 0;
    r.tolerance = a.threshold;
    r.detail = to_string(rep.clause);
  } else if (name == "selection") {
    const int act = need_action();
    if (traj.spec.variant != Variant::kUnpenalized) {
      throw UnsupportedOperation("check 'selection' needs an unpenalized run");
    }
    // Time at which the action last dropped out of the selection.
    double last = 0.0;
    bool selected_at_end = false;
    for (const auto& e : traj.selection_events) {
      if (e.player != k) continue;
      const bool has = std::find(e.actions.begin(), e.actions.end(), act) != e.actions.end();
      if (selected_at_end && !has) last = e.t;
      selected_at_end = has;
    }
    r.passed = !selected_at_end;
    r.value = last;
    r.tolerance = 0;
    r.detail = selected_at_end ? "still selected at the end"
                               : "never selected after t = value";
  } else {
    throw UsageError("unknown check '" + name + "'");
  }
  return r;
}

int cmd_analyze(const AnalyzeOptions& a, std::ostream& out) {
  for (const auto& c : a.checks) {
    if (std::find(check_names().begin(), check_names().end(), c) == check_names().end()) {
      throw UsageError("unknown check '" + c + "'");
    }
  }
  const LoadedRun run = load_run(a.path);
  AnalysisReport report;
  for (const auto& c : a.checks) report.add(run_check(c, a, run));
  out << report.summary_table();
  if (!a.report.empty()) write_file_atomic(a.report, report.to_json().dump(2) + "\n");
  return report.all_passed() ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::string grid_path, q, gamma, dt, seed;
  std::string out_dir = "sweep";
};

struct GridPoint {
  std::optional<double> q, gamma, dt;
  std::optional<std::uint64_t> seed;
};

std::vector<GridPoint> build_grid(const SweepOptions& s) {
  std::vector<double> qs = parse_numbers(s.q), gammas = parse_numbers(s.gamma),
                      dts = parse_numbers(s.dt), seeds = parse_numbers(s.seed);
  if (!s.grid_path.empty()) {
    const auto j = read_json_file(s.grid_path);
    try {
      if (j.contains("q")) qs = j["q"].get<std::vector<double>>();
      if (j.contains("gamma")) gammas = j["gamma"].get<std::vector<double>>();
      if (j.contains("dt")) dts = j["dt"].get<std::vector<double>>();
      if (j.contains("seed")) seeds = j["seed"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad grid: ") + e.what());
    }
  }
  for (double seed : seeds) {
    if (seed < 0 || seed != std::floor(seed)) throw UsageError("seeds are nonnegative integers");
  }
  if (qs.empty() && gammas.empty() && dts.empty() && seeds.empty()) return {};
  auto axis = [](const std::vector<double>& v) {
    std::vector<std::optional<double>> out(v.begin(), v.end());
    if (out.empty()) out.push_back(std::nullopt);
    return out;
  };
  std::vector<GridPoint> grid;
  for (auto q : axis(qs)) {
    for (auto g : axis(gammas)) {
      for (auto d : axis(dts)) {
        for (auto seed : axis(seeds)) {
          GridPoint p{q, g, d, std::nullopt};
          if (seed) p.seed = static_cast<std::uint64_t>(*seed);
          grid.push_back(p);
        }
      }
    }
  }
  return grid;
}

RunConfig apply_point(RunConfig c, const GridPoint& p, const Game& game) {
  if (p.q) {
    const Variant v = parse_variant(c.variant);
    if (v == Variant::kDirectField) {
      c.q = *p.q;
    } else {
      for (auto& s : c.penalties) {
        s = (Penalty::parse(s).kind() == PenaltyKind::kRenyi ? "renyi:" : "tsallis:") +
            format_double(*p.q);
      }
    }
  }
  if (p.gamma) c.gamma = {*p.gamma};
  if (p.dt) c.dt = *p.dt;
  if (p.seed) {
    std::mt19937_64 rng(*p.seed);
    const bool positive = parse_variant(c.variant) == Variant::kErevRoth;
    std::uniform_real_distribution<double> dist(positive ? 0.5 : -1.0,
                                                positive ? 1.5 : 1.0);
    c.y0.assign(game.total_actions(), 0.0);
    for (double& v : c.y0) v = dist(rng);
    c.x0.clear();
    c.init.clear();
  }
  return c;
}

int cmd_sweep(const RunOptions& o, const SweepOptions& s, std::ostream& out,
              std::ostream& err) {
  const RunConfig base = build_config(o);
  const std::vector<GridPoint> grid = build_grid(s);
  if (grid.empty()) {
    out << "empty grid, nothing to run\n";
    return kExitOk;
  }
  const Game game = load_game(base.game);
  std::filesystem::create_directories(s.out_dir);
  const long long n = static_cast<long long>(grid.size());
  std::vector<nlohmann::json> entries(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    const GridPoint& p = grid[i];
    nlohmann::json e;
    e["index"] = i;
    if (p.q) e["q"] = *p.q;
    if (p.gamma) e["gamma"] = *p.gamma;
    if (p.dt) e["dt"] = *p.dt;
    if (p.seed) e["seed"] = *p.seed;
    char name[32];
    std::snprintf(name, sizeof name, "run_%04lld.csv", i);
    const std::string file = (std::filesystem::path(s.out_dir) / name).string();
    try {
      RunConfig c = apply_point(base, p, game);
      c.out = file;
      const Trajectory traj = simulate(c, game);
      save_run(file, game, traj);
      double min_prob = 1.0;
      for (std::size_t t = 0; t < traj.size(); ++t) {
        for (double x : traj.x(t)) min_prob = std::min(min_prob, x);
      }
      e["file"] = name;
      e["config"] = c.to_json();
      e["status"] = "ok";
      auto last = traj.x(traj.size() - 1);
      e["final_x"] = std::vector<double>(last.begin(), last.end());
      e["min_probability"] = min_prob;
      e["reached_boundary"] = min_prob <= kSupportThreshold;
    } catch (const std::exception& ex) {
      e["status"] = "failed";
      e["error"] = ex.what();
    }
    entries[i] = std::move(e);
  }
  int failures = 0;
  nlohmann::json index;
  index["base"] = base.to_json();
  index["runs"] = nlohmann::json::array();
  for (auto& e : entries) {
    if (e["status"] != "ok") {
      ++failures;
      err << "run " << e["index"] << " failed: " << e["error"].get<std::string>() << "\n";
    }
    index["runs"].push_back(std::move(e));
  }
  index["failures"] = failures;
  const std::string index_path = (std::filesystem::path(s.out_dir) / "index.json").string();
  write_file_atomic(index_path, index.dump(2) + "\n");
  out << "ran " << n << " points (" << failures << " failed), index at " << index_path
      << "\n";
  return failures == 0 ? kExitOk : kExitError;
}

// ---------------------------------------------------------------------------
// games, choice

int cmd_games(const std::string& show, std::ostream& out) {
  if (!show.empty()) {
    out << game_to_json(load_game(show)).dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& name : builtin_game_names()) {
    out << name << "  " << builtin_game_description(name) << "\n";
  }
  return kExitOk;
}

int cmd_choice(const std::string& penalty, const std::string& y, const std::string& x,
               std::ostream& out) {
  const Penalty h = Penalty::parse(penalty);
  if (y.empty() == x.empty()) throw UsageError("give exactly one of --y and --x");
  if (!y.empty()) {
    const Vector scores = parse_numbers(y);
    out << "x = " << join(choice_map(h, scores)) << "\n";
    out << "h*(y) = " << format_double(conjugate_value(h, scores)) << "\n";
  } else {
    out << "y = " << join(inverse_choice(h, parse_numbers(x))) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reinforcement learning dynamics in finite games"};
  app.require_subcommand(1);

  RunOptions sim_opts;
  auto* sim = app.add_subcommand("simulate", "integrate one run and write CSV + JSON");
  add_run_options(sim, sim_opts, true);

  AnalyzeOptions an_opts;
  auto* an = app.add_subcommand("analyze", "run checks on a stored trajectory");
  an->add_option("trajectory", an_opts.path, "trajectory CSV")->required();
  an->add_option("--check", an_opts.checks, "checks to run")
      ->delimiter(',')
      ->required();
  an->add_option("--player", an_opts.player, "player (1-based)");
  an->add_option("--action", an_opts.action, "action (1-based)");
  an->add_option("--p", an_opts.p, "comparison profile (CSV), default uniform");
  an->add_option("--p-prime", an_opts.p_prime, "dominating strategy (CSV)");
  an->add_option("--profile", an_opts.profile, "pure profile (1-based CSV)");
  an->add_option("--tol", an_opts.tol, "override the check tolerance");
  an->add_option("--threshold", an_opts.threshold, "extinction threshold / slack");
  an->add_option("--epsilon", an_opts.epsilon, "rate loss of the strict envelope");
  an->add_option("--radius", an_opts.radius, "stationarity radius");
  an->add_option("--min-duration", an_opts.min_duration, "stationarity horizon");
  an->add_option("--fit-window", an_opts.fit_window, "envelope fit window 'begin,end'");
  an->add_option("--check-window", an_opts.check_window, "envelope check window");
  an->add_option("--report", an_opts.report, "write the JSON report here");

  RunOptions sw_opts;
  SweepOptions sw;
  auto* swc = app.add_subcommand("sweep", "run a parameter grid in parallel");
  add_run_options(swc, sw_opts, false);
  swc->add_option("--grid", sw.grid_path, "JSON file with q/gamma/dt/seed lists");
  swc->add_option("--q-grid", sw.q, "q values (CSV)");
  swc->add_option("--gamma-grid", sw.gamma, "rates (CSV)");
  swc->add_option("--dt-grid", sw.dt, "step sizes (CSV)");
  swc->add_option("--seed-grid", sw.seed, "random y0 seeds (CSV)");
  swc->add_option("--out-dir", sw.out_dir, "output directory");

  std::string show;
  auto* games = app.add_subcommand("games", "list builtin games");
  games->add_option("--show", show, "print a game as JSON");

  std::string penalty = "gibbs", y, x;
  auto* choice = app.add_subcommand("choice", "evaluate a choice map");
  choice->add_option("--penalty", penalty, "penalty spec");
  choice->add_option("--y", y, "scores (CSV)");
  choice->add_option("--x", x, "strategy (CSV) to invert");

  std::vector<const char*> argv{"rlgames"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts, out);
    if (an->parsed()) return cmd_analyze(an_opts, out);
    if (swc->parsed()) return cmd_sweep(sw_opts, sw, out, err);
    if (games->parsed()) return cmd_games(show, out);
    if (choice->parsed()) return cmd_choice(penalty, y, x, out);
  } catch (const UnsupportedOperation& e) {
    err << "unsupported: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace rlgames::cli
