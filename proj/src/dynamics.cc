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

#include "rlgames/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Dense>

#include "rlgames/choice.hpp"

namespace rlgames {
namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kMaxSimplexDrift = 1e-7;

using Field = std::function<void(std::span<const double>, std::span<double>)>;

std::vector<int> offsets_of(const std::vector<int>& counts) {
  std::vector<int> offsets(counts.size());
  int acc = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    offsets[k] = acc;
    acc += counts[k];
  }
  return offsets;
}

long long step_count(const IntegrationOptions& opts) {
  if (!(opts.dt > 0) || !std::isfinite(opts.dt)) {
    throw std::invalid_argument("integrate: dt must be positive");
  }
  if (!(opts.horizon >= 0) || !std::isfinite(opts.horizon)) {
    throw std::invalid_argument("integrate: horizon must be nonnegative");
  }
  if (opts.stride < 1) throw std::invalid_argument("integrate: stride must be >= 1");
  return std::llround(opts.horizon / opts.dt);
}

bool should_store(long long i, long long steps, int stride) {
  return i % stride == 0 || i == steps;
}

void check_finite(std::span<const double> s, double t) {
  for (double v : s) {
    if (!std::isfinite(v)) {
      throw std::runtime_error("integrate: non-finite state at t = " +
                               std::to_string(t));
    }
  }
}

// Classical RK4 on a flat state vector.
class Rk4 {
 public:
  explicit Rk4(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  void step(const Field& f, std::vector<double>& s, double dt) {
    const std::size_t n = s.size();
    f(s, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = s[i] + 0.5 * dt * k1_[i];
    f(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = s[i] + 0.5 * dt * k2_[i];
    f(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = s[i] + dt * k3_[i];
    f(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
  }

  const std::vector<double>& first_stage() const { return k1_; }

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

// Strategy x and payoffs of the score-based variants, with reusable buffers.
class ScoreSystem {
 public:
  ScoreSystem(const Game& game, const DynamicsSpec& spec)
      : game_(game), spec_(spec), offsets_(offsets_of(game.action_counts())),
        x_(game.total_actions()), v_(game.total_actions()),
        scaled_(game.total_actions()) {}

  void strategy(std::span<const double> y, std::span<double> x) {
    for (int k = 0; k < game_.num_players(); ++k) {
      const int off = offsets_[k];
      const int n = game_.num_actions(k);
      auto yk = y.subspan(off, n);
      auto xk = x.subspan(off, n);
      switch (spec_.variant) {
        case Variant::kErevRoth: {
          double sum = 0.0;
          for (double v : yk) {
            if (!(v > 0)) {
              throw std::domain_error("erev-roth: scores must stay positive");
            }
            sum += v;
          }
          for (int a = 0; a < n; ++a) xk[a] = yk[a] / sum;
          break;
        }
        case Variant::kNoiseLevel: {
          auto sk = std::span<double>(scaled_).subspan(off, n);
          for (int a = 0; a < n; ++a) sk[a] = spec_.rate(k) * yk[a];
          choice_map(spec_.penalties[k], sk, xk);
          break;
        }
        default:
          choice_map(spec_.penalties[k], yk, xk);
      }
    }
  }

  void field(std::span<const double> y, std::span<double> dy) {
    strategy(y, x_);
    all_payoff_vectors(game_, x_, v_);
    const double log_discount =
        spec_.variant == Variant::kDiscounted ? std::log(spec_.discount) : 0.0;
    for (int k = 0; k < game_.num_players(); ++k) {
      const int off = offsets_[k];
      for (int a = 0; a < game_.num_actions(k); ++a) {
        const int i = off + a;
        switch (spec_.variant) {
          case Variant::kNoiseLevel: dy[i] = v_[i]; break;
          case Variant::kErevRoth: dy[i] = x_[i] * v_[i]; break;
          default: dy[i] = spec_.rate(k) * v_[i] + log_discount * y[i];
        }
      }
    }
  }

 private:
  const Game& game_;
  const DynamicsSpec& spec_;
  std::vector<int> offsets_;
  std::vector<double> x_, v_, scaled_;
};

Vector face_weighted_field(std::span<const double> w, std::span<const double> v,
                           std::span<const int> face, std::size_t n) {
  Vector out(n, 0.0);
  double wsum = 0.0;
  double wv = 0.0;
  for (int a : face) {
    wsum += w[a];
    wv += w[a] * v[a];
  }
  if (!(wsum > 0)) return out;
  const double mean = wv / wsum;
  for (int a : face) out[a] = w[a] * (v[a] - mean);
  return out;
}

// Field of one player on a fixed face. Stage points may sit slightly outside
// the simplex, so entries are clamped before use in weights.
Vector face_field(FieldKind kind, double q, const Penalty* penalty,
                  std::span<const double> x, std::span<const int> face,
                  std::span<const double> v) {
  const std::size_t n = x.size();
  Vector xc(x.begin(), x.end());
  for (double& e : xc) e = std::max(e, 0.0);
  Vector w(n, 0.0);
  switch (kind) {
    case FieldKind::kReplicator:
      for (int a : face) w[a] = xc[a];
      return face_weighted_field(w, v, face, n);
    case FieldKind::kProjection:
      for (int a : face) w[a] = 1.0;
      return face_weighted_field(w, v, face, n);
    case FieldKind::kQReplicator:
      for (int a : face) w[a] = std::pow(xc[a], 2.0 - q);
      return face_weighted_field(w, v, face, n);
    case FieldKind::kLogBarrier:
      for (int a : face) w[a] = xc[a] * xc[a];
      return face_weighted_field(w, v, face, n);
    case FieldKind::kRenyi: {
      Vector out(n, 0.0);
      double sq = 0.0;
      for (int a : face) {
        xc[a] = std::max(xc[a], 1e-300);
        sq += std::pow(xc[a], q);
      }
      double xv = 0.0, gv = 0.0, big_g = -1.0;
      Vector g(n, 0.0), x_over_xi(n, 0.0);
      for (int a : face) {
        const double xi = q * std::pow(xc[a], q - 1.0) / sq;
        x_over_xi[a] = xc[a] / xi;
        g[a] = x_over_xi[a] - xc[a];
        xv += xc[a] * v[a];
        gv += g[a] * v[a];
        big_g += x_over_xi[a];
      }
      for (int a : face) {
        out[a] = x_over_xi[a] * v[a] - xc[a] * xv - g[a] * gv / big_g;
      }
      return out;
    }
    case FieldKind::kGenericRLD: {
      if (penalty == nullptr) {
        throw std::invalid_argument("generic field requires a penalty");
      }
      for (int a : face) xc[a] = std::max(xc[a], 1e-300);
      const Eigen::MatrixXd hess = penalty->face_hessian(xc, face);
      const int m = static_cast<int>(face.size());
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        throw std::runtime_error("generic field: singular face Hessian");
      }
      const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(m, m));
      const Eigen::VectorXd row = inv.rowwise().sum();
      const double total = row.sum();
      Eigen::VectorXd vf(m);
      for (int i = 0; i < m; ++i) vf[i] = v[face[i]];
      const Eigen::VectorXd dx = inv * vf - row * (row.dot(vf) / total);
      Vector out(n, 0.0);
      for (int i = 0; i < m; ++i) out[face[i]] = dx[i];
      return out;
    }
  }
  return Vector(n, 0.0);
}

// Direct integration in strategy space. `field` receives the faces fixed at
// the start of each step.
using FaceField = std::function<void(std::span<const double>,
                                     const std::vector<std::vector<int>>&,
                                     std::span<double>)>;

Trajectory integrate_strategy(const Game& game, const StrategyProfile& x0,
                              const IntegrationOptions& opts,
                              const FaceField& field, bool zero_below_threshold) {
  game.check_profile(x0);
  const long long steps = step_count(opts);
  const std::vector<int> offsets = offsets_of(game.action_counts());
  const int players = game.num_players();
  Trajectory traj(game.action_counts(), false);
  traj.dt = opts.dt;
  traj.horizon = opts.horizon;

  std::vector<double> x(x0.flat().begin(), x0.flat().end());
  std::vector<std::vector<int>> faces(players);
  auto refresh_faces = [&] {
    for (int k = 0; k < players; ++k) {
      faces[k] = support(std::span<const double>(x).subspan(offsets[k],
                                                            game.num_actions(k)));
    }
  };
  if (zero_below_threshold) {
    for (double& e : x) {
      if (e <= kSupportThreshold) e = 0.0;
    }
  }
  refresh_faces();
  traj.append(0.0, x);

  Rk4 rk4(x.size());
  const Field f = [&](std::span<const double> s, std::span<double> ds) {
    field(s, faces, ds);
  };
  for (long long i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) * opts.dt;
    std::vector<double> prev = x;
    rk4.step(f, x, opts.dt);
    check_finite(x, t);
    double rate = 0.0;
    for (double e : rk4.first_stage()) rate = std::max(rate, std::abs(e));
    const double bound = 2.0 * opts.dt * rate + 1e-12;
    for (int k = 0; k < players; ++k) {
      double sum = 0.0;
      for (int a = 0; a < game.num_actions(k); ++a) {
        double& e = x[offsets[k] + a];
        sum += e;
        if (e < -bound) {
          throw StepRejected("integrate: coordinate overshoot " +
                             std::to_string(-e) + " at t = " + std::to_string(t) +
                             "; reduce dt");
        }
      }
      if (std::abs(sum - 1.0) > kMaxSimplexDrift) {
        throw StepRejected("integrate: simplex drift " +
                           std::to_string(std::abs(sum - 1.0)) + " at t = " +
                           std::to_string(t) + "; reduce dt");
      }
      sum = 0.0;
      for (int a = 0; a < game.num_actions(k); ++a) {
        double& e = x[offsets[k] + a];
        const bool was_in = prev[offsets[k] + a] > 0;
        if (e < 0 || (zero_below_threshold && e <= kSupportThreshold)) e = 0.0;
        if (was_in && e == 0.0) traj.support_events.push_back({t, k, a});
        sum += e;
      }
      for (int a = 0; a < game.num_actions(k); ++a) x[offsets[k] + a] /= sum;
    }
    refresh_faces();
    if (should_store(i, steps, opts.stride)) traj.append(t, x);
  }
  return traj;
}

void require_players(const std::vector<Penalty>& penalties, const Game& game) {
  if (static_cast<int>(penalties.size()) != game.num_players()) {
    throw std::invalid_argument("dynamics: need one penalty per player, got " +
                                std::to_string(penalties.size()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Names

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kScoreRL: return "rl";
    case Variant::kDiscounted: return "discounted";
    case Variant::kNoiseLevel: return "noise";
    case Variant::kErevRoth: return "erev-roth";
    case Variant::kCrossBS: return "cross";
    case Variant::kUnpenalized: return "url";
    case Variant::kDirectField: return "direct";
  }
  return "?";
}

std::string to_string(FieldKind f) {
  switch (f) {
    case FieldKind::kGenericRLD: return "generic";
    case FieldKind::kReplicator: return "replicator";
    case FieldKind::kProjection: return "projection";
    case FieldKind::kQReplicator: return "qreplicator";
    case FieldKind::kRenyi: return "renyi";
    case FieldKind::kLogBarrier: return "logbarrier";
  }
  return "?";
}

std::string to_string(TieRule t) {
  return t == TieRule::kLowestIndex ? "lowest" : "uniform";
}

Variant parse_variant(const std::string& s) {
  for (Variant v : {Variant::kScoreRL, Variant::kDiscounted, Variant::kNoiseLevel,
                    Variant::kErevRoth, Variant::kCrossBS, Variant::kUnpenalized,
                    Variant::kDirectField}) {
    if (s == to_string(v)) return v;
  }
  throw std::invalid_argument("unknown variant '" + s +
                              "' (rl | discounted | noise | erev-roth | cross | "
                              "url | direct)");
}

FieldKind parse_field_kind(const std::string& s) {
  for (FieldKind f : {FieldKind::kGenericRLD, FieldKind::kReplicator,
                      FieldKind::kProjection, FieldKind::kQReplicator,
                      FieldKind::kRenyi, FieldKind::kLogBarrier}) {
    if (s == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown field '" + s +
                              "' (generic | replicator | projection | "
                              "qreplicator | renyi | logbarrier)");
}

TieRule parse_tie_rule(const std::string& s) {
  if (s == "lowest") return TieRule::kLowestIndex;
  if (s == "uniform") return TieRule::kUniform;
  throw std::invalid_argument("unknown tie rule '" + s + "' (lowest | uniform)");
}

// ---------------------------------------------------------------------------
// Spec

bool DynamicsSpec::uses_penalties() const {
  switch (variant) {
    case Variant::kScoreRL:
    case Variant::kDiscounted:
    case Variant::kNoiseLevel:
      return true;
    case Variant::kDirectField:
      return field == FieldKind::kGenericRLD;
    default:
      return false;
  }
}

bool DynamicsSpec::extended_solution_mode() const {
  if (variant != Variant::kDirectField) return false;
  switch (field) {
    case FieldKind::kProjection: return true;
    case FieldKind::kQReplicator: return field_q > 1.0;
    case FieldKind::kGenericRLD:
      return std::any_of(penalties.begin(), penalties.end(),
                         [](const Penalty& p) { return !p.steep(); });
    default: return false;
  }
}

void DynamicsSpec::validate(const Game& game) const {
  if (uses_penalties()) require_players(penalties, game);
  if (!rates.empty()) {
    if (static_cast<int>(rates.size()) != game.num_players()) {
      throw std::invalid_argument("dynamics: need one rate per player");
    }
    for (double g : rates) {
      if (!(g > 0) || !std::isfinite(g)) {
        throw std::invalid_argument("dynamics: rates must be positive");
      }
    }
  }
  if (variant == Variant::kDiscounted && !(discount > 0 && discount <= 1)) {
    throw std::invalid_argument("dynamics: discount must lie in (0, 1]");
  }
  if (variant == Variant::kDirectField) {
    if (field == FieldKind::kQReplicator && !(field_q > 0)) {
      throw std::invalid_argument("dynamics: q-replicator needs q > 0");
    }
    if (field == FieldKind::kRenyi && (!(field_q > 0) || field_q == 1.0)) {
      throw std::invalid_argument("dynamics: Renyi field needs q > 0, q != 1");
    }
  }
  if (variant == Variant::kCrossBS) {
    for (int k = 0; k < game.num_players(); ++k) {
      for (double u : game.payoffs(k)) {
        if (!(u > 0 && u < 1)) {
          throw std::invalid_argument(
              "cross: payoffs must lie in (0, 1); rescale the game");
        }
      }
    }
  }
  if (variant == Variant::kUnpenalized && !(warmup >= 0)) {
    throw std::invalid_argument("dynamics: warm-up length must be >= 0");
  }
}

nlohmann::json DynamicsSpec::to_json() const {
  nlohmann::json j;
  j["variant"] = to_string(variant);
  std::vector<std::string> names;
  for (const auto& p : penalties) names.push_back(p.to_string());
  j["penalties"] = names;
  j["rates"] = rates;
  j["discount"] = discount;
  j["field"] = to_string(field);
  j["field_q"] = field_q;
  j["tie"] = to_string(tie);
  j["warmup"] = warmup;
  return j;
}

DynamicsSpec DynamicsSpec::from_json(const nlohmann::json& j) {
  DynamicsSpec s;
  s.variant = parse_variant(j.value("variant", std::string("rl")));
  for (const auto& name : j.value("penalties", std::vector<std::string>{})) {
    s.penalties.push_back(Penalty::parse(name));
  }
  s.rates = j.value("rates", std::vector<double>{});
  s.discount = j.value("discount", 1.0);
  s.field = parse_field_kind(j.value("field", std::string("replicator")));
  s.field_q = j.value("field_q", 1.0);
  s.tie = parse_tie_rule(j.value("tie", std::string("lowest")));
  s.warmup = j.value("warmup", 1.0);
  return s;
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory::Trajectory(std::vector<int> counts, bool has_scores)
    : counts_(std::move(counts)),
      width_(std::accumulate(counts_.begin(), counts_.end(), 0)),
      has_scores_(has_scores) {}

std::span<const double> Trajectory::y(std::size_t i) const {
  if (!has_scores_) throw UnsupportedOperation("trajectory has no scores (direct strategy-space run)");
  return {y_.data() + i * width_, static_cast<std::size_t>(width_)};
}

std::span<const double> Trajectory::average(std::size_t i) const {
  if (averages_.empty()) throw UnsupportedOperation("trajectory has no averages");
  return {averages_.data() + i * width_, static_cast<std::size_t>(width_)};
}

StrategyProfile Trajectory::strategy(std::size_t i) const {
  auto xi = x(i);
  return StrategyProfile(counts_, std::vector<double>(xi.begin(), xi.end()));
}

ScoreProfile Trajectory::score(std::size_t i) const {
  auto yi = y(i);
  return ScoreProfile(counts_, std::vector<double>(yi.begin(), yi.end()));
}

void Trajectory::append(double t, std::span<const double> x,
                        std::span<const double> y,
                        std::span<const double> average) {
  if (!times_.empty() && !(t > times_.back())) {
    throw std::invalid_argument("trajectory: times must increase strictly");
  }
  if (static_cast<int>(x.size()) != width_ ||
      (has_scores_ && static_cast<int>(y.size()) != width_)) {
    throw std::invalid_argument("trajectory: sample width mismatch");
  }
  times_.push_back(t);
  x_.insert(x_.end(), x.begin(), x.end());
  if (has_scores_) y_.insert(y_.end(), y.begin(), y.end());
  if (!average.empty()) {
    if (averages_.size() != (times_.size() - 1) * width_) {
      throw std::invalid_argument("trajectory: averages must be given for all samples");
    }
    averages_.insert(averages_.end(), average.begin(), average.end());
  }
}

// ---------------------------------------------------------------------------
// Fields

StrategyProfile strategy_of(const DynamicsSpec& spec, const ScoreProfile& y) {
  std::vector<double> x(y.total_size());
  std::vector<int> offsets = offsets_of(y.counts());
  for (int k = 0; k < y.num_players(); ++k) {
    auto yk = y[k];
    auto xk = std::span<double>(x).subspan(offsets[k], yk.size());
    if (spec.variant == Variant::kErevRoth) {
      const double sum = std::accumulate(yk.begin(), yk.end(), 0.0);
      for (std::size_t a = 0; a < yk.size(); ++a) xk[a] = yk[a] / sum;
    } else if (spec.variant == Variant::kNoiseLevel) {
      Vector scaled(yk.begin(), yk.end());
      for (double& v : scaled) v *= spec.rate(k);
      choice_map(spec.penalties.at(k), scaled, xk);
    } else {
      choice_map(spec.penalties.at(k), yk, xk);
    }
  }
  return StrategyProfile(y.counts(), std::move(x));
}

ScoreProfile score_field(const Game& game, const DynamicsSpec& spec,
                         const ScoreProfile& y) {
  game.check_profile(y);
  spec.validate(game);
  if (spec.variant != Variant::kScoreRL && spec.variant != Variant::kDiscounted &&
      spec.variant != Variant::kNoiseLevel) {
    throw std::invalid_argument("score_field: variant " + to_string(spec.variant) +
                                " has no penalized score field");
  }
  ScoreSystem system(game, spec);
  ScoreProfile dy(game.action_counts());
  system.field(y.flat(), dy.mutable_flat());
  return dy;
}

Vector weighted_field(std::span<const double> weights, std::span<const double> x,
                      std::span<const double> v) {
  const std::vector<int> face = support(x);
  return face_weighted_field(weights, v, face, x.size());
}

Vector player_field(FieldKind kind, double q, const Penalty* penalty,
                    std::span<const double> x, std::span<const double> v) {
  if (x.size() != v.size()) throw std::invalid_argument("player_field: size mismatch");
  const std::vector<int> face = support(x);
  return face_field(kind, q, penalty, x, face, v);
}

std::vector<double> strategy_field(const Game& game, const DynamicsSpec& spec,
                                   const StrategyProfile& x) {
  game.check_profile(x);
  std::vector<double> v(game.total_actions());
  all_payoff_vectors(game, x.flat(), v);
  std::vector<double> dx(game.total_actions(), 0.0);
  for (int k = 0; k < game.num_players(); ++k) {
    const Penalty* pen = spec.penalties.empty() ? nullptr : &spec.penalties.at(k);
    const Vector f = player_field(spec.field, spec.field_q, pen, x[k],
                                  std::span<const double>(v).subspan(x.offset(k), x.size(k)));
    std::copy(f.begin(), f.end(), dx.begin() + x.offset(k));
  }
  return dx;
}

ScoreProfile erev_roth_field(const Game& game, const ScoreProfile& y) {
  game.check_profile(y);
  DynamicsSpec spec;
  spec.variant = Variant::kErevRoth;
  ScoreSystem system(game, spec);
  ScoreProfile dy(game.action_counts());
  system.field(y.flat(), dy.mutable_flat());
  return dy;
}

std::vector<double> cross_bs_field(const Game& game, const StrategyProfile& x) {
  game.check_profile(x);
  std::vector<double> v(game.total_actions());
  all_payoff_vectors(game, x.flat(), v);
  std::vector<double> dx(game.total_actions(), 0.0);
  for (int k = 0; k < game.num_players(); ++k) {
    auto xk = x[k];
    const int off = x.offset(k);
    const int n = x.size(k);
    for (int a = 0; a < n; ++a) {
      double others = 0.0;
      for (int b = 0; b < n; ++b) {
        if (b != a) others += xk[b] * xk[a] * v[off + b];
      }
      dx[off + a] = xk[a] * (1.0 - xk[a]) * v[off + a] - others;
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------
// Integration

Trajectory integrate(const Game& game, const DynamicsSpec& spec,
                     const ScoreProfile& y0, const IntegrationOptions& opts) {
  game.check_profile(y0);
  spec.validate(game);
  if (spec.variant == Variant::kUnpenalized) {
    return integrate_unpenalized(game, spec, y0, opts);
  }
  if (spec.variant == Variant::kCrossBS || spec.variant == Variant::kDirectField) {
    throw std::invalid_argument("integrate: variant " + to_string(spec.variant) +
                                " starts from a strategy profile");
  }
  check_finite(y0.flat(), 0.0);
  DynamicsSpec effective = spec;
  if (effective.variant == Variant::kDiscounted && effective.discount == 1.0) {
    effective.variant = Variant::kScoreRL;
  }
  const long long steps = step_count(opts);
  ScoreSystem system(game, effective);
  Trajectory traj(game.action_counts(), true);
  traj.spec = spec;
  traj.integrator = "rk4";
  traj.dt = opts.dt;
  traj.horizon = opts.horizon;

  std::vector<double> y(y0.flat().begin(), y0.flat().end());
  std::vector<double> x(y.size());
  system.strategy(y, x);
  traj.append(0.0, x, y);
  Rk4 rk4(y.size());
  const Field f = [&](std::span<const double> s, std::span<double> ds) {
    system.field(s, ds);
  };
  for (long long i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) * opts.dt;
    rk4.step(f, y, opts.dt);
    check_finite(y, t);
    if (should_store(i, steps, opts.stride)) {
      system.strategy(y, x);
      traj.append(t, x, y);
    }
  }
  return traj;
}

Trajectory integrate(const Game& game, const DynamicsSpec& spec,
                     const StrategyProfile& x0, const IntegrationOptions& opts) {
  game.check_profile(x0);
  spec.validate(game);
  Trajectory traj;
  if (spec.variant == Variant::kDirectField) {
    const bool steep_field = !spec.extended_solution_mode();
    if (steep_field) {
      for (int k = 0; k < game.num_players(); ++k) {
        for (double e : x0[k]) {
          if (!(e > kSupportThreshold)) {
            throw std::invalid_argument(
                "integrate: steep fields need an interior initial state");
          }
        }
      }
    }
    const std::vector<int> offsets = offsets_of(game.action_counts());
    std::vector<double> v(game.total_actions());
    traj = integrate_strategy(
        game, x0, opts,
        [&](std::span<const double> s, const std::vector<std::vector<int>>& faces,
            std::span<double> ds) {
          all_payoff_vectors(game, s, v);
          for (int k = 0; k < game.num_players(); ++k) {
            const int n = game.num_actions(k);
            const Penalty* pen =
                spec.penalties.empty() ? nullptr : &spec.penalties[k];
            const Vector fk = face_field(spec.field, spec.field_q, pen,
                                         s.subspan(offsets[k], n), faces[k],
                                         std::span<const double>(v).subspan(offsets[k], n));
            std::copy(fk.begin(), fk.end(), ds.begin() + offsets[k]);
          }
        },
        !steep_field);
    traj.integrator = "rk4-direct";
  } else if (spec.variant == Variant::kCrossBS) {
    std::vector<double> v(game.total_actions());
    const std::vector<int> offsets = offsets_of(game.action_counts());
    traj = integrate_strategy(
        game, x0, opts,
        [&](std::span<const double> s, const std::vector<std::vector<int>>&,
            std::span<double> ds) {
          all_payoff_vectors(game, s, v);
          for (int k = 0; k < game.num_players(); ++k) {
            const int off = offsets[k];
            const int n = game.num_actions(k);
            for (int a = 0; a < n; ++a) {
              double others = 0.0;
              for (int b = 0; b < n; ++b) {
                if (b != a) others += s[off + b] * s[off + a] * v[off + b];
              }
              ds[off + a] = s[off + a] * (1.0 - s[off + a]) * v[off + a] - others;
            }
          }
        },
        false);
    traj.integrator = "rk4-direct";
  } else {
    throw std::invalid_argument("integrate: variant " + to_string(spec.variant) +
                                " starts from a score profile");
  }
  traj.spec = spec;
  return traj;
}

Vector select_best(std::span<const double> y, TieRule tie) {
  const double top = *std::max_element(y.begin(), y.end());
  const double tol = kTieTolerance * std::max(1.0, std::abs(top));
  Vector x(y.size(), 0.0);
  int count = 0;
  for (std::size_t a = 0; a < y.size(); ++a) {
    if (y[a] >= top - tol) {
      if (tie == TieRule::kLowestIndex) {
        x[a] = 1.0;
        return x;
      }
      x[a] = 1.0;
      ++count;
    }
  }
  for (double& e : x) e /= count;
  return x;
}

UnpenalizedState unpenalized_step(const Game& game, const DynamicsSpec& spec,
                                  const UnpenalizedState& state, double dt) {
  const int players = game.num_players();
  std::vector<double> played;
  for (int k = 0; k < players; ++k) {
    const Vector xk = select_best(state.y[k], spec.tie);
    played.insert(played.end(), xk.begin(), xk.end());
  }
  UnpenalizedState next;
  next.played = StrategyProfile(game.action_counts(), played);
  std::vector<double> v(game.total_actions());
  all_payoff_vectors(game, played, v);
  next.y = state.y;
  auto ny = next.y.mutable_flat();
  for (std::size_t i = 0; i < v.size(); ++i) ny[i] += dt * v[i];

  const double weight = spec.warmup + state.t;
  const double denom = weight + dt;
  const std::vector<int> offsets = offsets_of(game.action_counts());
  next.correlated.resize(game.num_profiles());
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx) {
    double w = 1.0;
    for (int k = 0; k < players; ++k) {
      w *= played[offsets[k] + (idx / game.stride(k)) % game.num_actions(k)];
    }
    next.correlated[idx] = (weight * state.correlated[idx] + dt * w) / denom;
  }
  next.t = state.t + dt;
  return next;
}

Trajectory integrate_unpenalized(const Game& game, const DynamicsSpec& spec,
                                 const std::optional<ScoreProfile>& y0,
                                 const IntegrationOptions& opts) {
  DynamicsSpec s = spec;
  s.variant = Variant::kUnpenalized;
  s.validate(game);
  const long long steps = step_count(opts);
  const int players = game.num_players();
  const std::vector<int> offsets = offsets_of(game.action_counts());
  const StrategyProfile uniform = StrategyProfile::uniform(game.action_counts());

  UnpenalizedState state;
  {
    const CorrelatedStrategy start = CorrelatedStrategy::product(game, uniform);
    state.correlated.assign(start.joint().begin(), start.joint().end());
  }
  const bool warm_start = !y0.has_value();
  if (warm_start) {
    state.y = ScoreProfile(game.action_counts());
    std::vector<double> v(game.total_actions());
    all_payoff_vectors(game, uniform.flat(), v);
    auto yf = state.y.mutable_flat();
    for (std::size_t i = 0; i < v.size(); ++i) yf[i] = s.warmup * v[i];
  } else {
    game.check_profile(*y0);
    check_finite(y0->flat(), 0.0);
    state.y = *y0;
  }

  double scale = 1.0;
  for (int k = 0; k < players; ++k) {
    for (double u : game.payoffs(k)) scale = std::max(scale, std::abs(u));
  }

  Trajectory traj(game.action_counts(), true);
  traj.spec = s;
  traj.integrator = "euler";
  traj.dt = opts.dt;
  traj.horizon = opts.horizon;

  std::vector<double> marginals(game.total_actions());
  auto fill_marginals = [&](const std::vector<double>& chi) {
    std::fill(marginals.begin(), marginals.end(), 0.0);
    for (std::size_t idx = 0; idx < chi.size(); ++idx) {
      for (int k = 0; k < players; ++k) {
        marginals[offsets[k] + (idx / game.stride(k)) % game.num_actions(k)] += chi[idx];
      }
    }
  };
  std::vector<std::vector<int>> last_selection(players);
  auto selection = [&](const StrategyProfile& played, double t) {
    for (int k = 0; k < players; ++k) {
      std::vector<int> chosen = support(played[k]);
      if (chosen != last_selection[k]) {
        traj.selection_events.push_back({t, k, chosen});
        last_selection[k] = std::move(chosen);
      }
    }
  };
  auto check_identity = [&](const UnpenalizedState& st) {
    if (!warm_start || !(s.warmup + st.t > 0)) return;
    const CorrelatedStrategy chi(game, st.correlated, 1e-9);
    for (int k = 0; k < players; ++k) {
      const Vector vc = marginal_payoff_vector(game, k, chi);
      auto yk = st.y[k];
      for (std::size_t a = 0; a < vc.size(); ++a) {
        const double err = std::abs(vc[a] - yk[a] / (s.warmup + st.t));
        traj.max_identity_error = std::max(traj.max_identity_error, err);
      }
    }
    if (traj.max_identity_error > 1e-8 * scale) {
      throw std::logic_error("unpenalized dynamics: score/average identity broken (" +
                             std::to_string(traj.max_identity_error) + ")");
    }
  };

  check_identity(state);
  for (long long i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * opts.dt;
    state.t = t;
    // The selection at time t drives the step [t, t + dt).
    std::vector<double> played;
    for (int k = 0; k < players; ++k) {
      const Vector xk = select_best(state.y[k], s.tie);
      played.insert(played.end(), xk.begin(), xk.end());
    }
    const StrategyProfile x(game.action_counts(), played);
    selection(x, t);
    if (should_store(i, steps, opts.stride)) {
      fill_marginals(state.correlated);
      traj.append(t, x.flat(), state.y.flat(), marginals);
    }
    if (i == steps) break;
    state = unpenalized_step(game, s, state, opts.dt);
    state.t = static_cast<double>(i + 1) * opts.dt;
    check_finite(state.y.flat(), state.t);
    check_identity(state);
  }
  traj.final_correlated = state.correlated;
  return traj;
}

Trajectory integrate_brd(const Game& game, const StrategyProfile& x0, TieRule tie,
                         const IntegrationOptions& opts) {
  game.check_profile(x0);
  const long long steps = step_count(opts);
  const int players = game.num_players();
  const std::vector<int> offsets = offsets_of(game.action_counts());
  Trajectory traj(game.action_counts(), false);
  traj.integrator = "euler-brd";
  traj.dt = opts.dt;
  traj.horizon = opts.horizon;
  std::vector<double> x(x0.flat().begin(), x0.flat().end());
  std::vector<double> v(x.size());
  traj.append(0.0, x);
  for (long long i = 1; i <= steps; ++i) {
    all_payoff_vectors(game, x, v);
    for (int k = 0; k < players; ++k) {
      const int n = game.num_actions(k);
      const Vector br = select_best(std::span<const double>(v).subspan(offsets[k], n), tie);
      for (int a = 0; a < n; ++a) {
        double& e = x[offsets[k] + a];
        e += opts.dt * (br[a] - e);
      }
    }
    if (should_store(i, steps, opts.stride)) {
      traj.append(static_cast<double>(i) * opts.dt, x);
    }
  }
  return traj;
}

}  // namespace rlgames
