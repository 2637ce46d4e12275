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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rlgames/choice.hpp"
#include "rlgames/dynamics.hpp"
#include "rlgames/game_io.hpp"
#include "rlgames/penalty.hpp"

using namespace rlgames;

namespace {

DynamicsSpec score_spec(const Penalty& h, int players = 2) {
  DynamicsSpec s;
  s.variant = Variant::kScoreRL;
  s.penalties.assign(players, h);
  return s;
}

DynamicsSpec direct_spec(FieldKind f, double q = 1.0) {
  DynamicsSpec s;
  s.variant = Variant::kDirectField;
  s.field = f;
  s.field_q = q;
  return s;
}

IntegrationOptions opts(double horizon, double dt, int stride = 1) {
  IntegrationOptions o;
  o.horizon = horizon;
  o.dt = dt;
  o.stride = stride;
  return o;
}

Game random_game(const std::vector<int>& counts, std::mt19937_64& rng, double lo = -1,
                 double hi = 1) {
  std::size_t profiles = 1;
  for (int n : counts) profiles *= n;
  std::vector<Vector> payoffs;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    payoffs.push_back(oracle::random_vector(rng, static_cast<int>(profiles), lo, hi));
  }
  return Game(counts, payoffs);
}

Vector replicator(std::span<const double> x, std::span<const double> v) {
  double mean = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) mean += x[a] * v[a];
  Vector out(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) out[a] = x[a] * (v[a] - mean);
  return out;
}

}  // namespace

TEST_CASE("enum names round trip") {
  for (auto v : {Variant::kScoreRL, Variant::kDiscounted, Variant::kNoiseLevel,
                 Variant::kErevRoth, Variant::kCrossBS, Variant::kUnpenalized,
                 Variant::kDirectField}) {
    CHECK(parse_variant(to_string(v)) == v);
  }
  for (auto f : {FieldKind::kGenericRLD, FieldKind::kReplicator, FieldKind::kProjection,
                 FieldKind::kQReplicator, FieldKind::kRenyi, FieldKind::kLogBarrier}) {
    CHECK(parse_field_kind(to_string(f)) == f);
  }
  CHECK(parse_tie_rule("uniform") == TieRule::kUniform);
  CHECK_THROWS_AS(parse_variant("nope"), std::invalid_argument);
  const DynamicsSpec s = score_spec(Penalty::tsallis(1.5));
  const DynamicsSpec back = DynamicsSpec::from_json(s.to_json());
  CHECK(back.penalties[1].to_string() == "tsallis:1.5");
}

TEST_CASE("score fields") {
  const Game mp = builtin_game("matching_pennies");
  const auto f0 = score_field(mp, score_spec(Penalty::gibbs()), ScoreProfile({2, 2}));
  for (double v : f0.flat()) CHECK(v == doctest::Approx(0.0).scale(1.0));

  const Game d = builtin_game("dominated2");
  DynamicsSpec s = score_spec(Penalty::gibbs());
  s.rates = {2.5, 1.0};
  const ScoreProfile y({2, 2}, std::vector<double>{0.3, -1.2, 0.7, 4.0});
  const auto f = score_field(d, s, y);
  CHECK(f[0][0] == doctest::Approx(2.5));
  CHECK(f[0][1] == doctest::Approx(0.0).scale(1.0));

  DynamicsSpec disc = score_spec(Penalty::gibbs());
  disc.variant = Variant::kDiscounted;
  disc.discount = 0.9;
  const ScoreProfile y1({2, 2}, std::vector<double>{1, 0, 0, 0});
  const auto base = score_field(mp, score_spec(Penalty::gibbs()), y1);
  const auto fd = score_field(mp, disc, y1);
  CHECK(fd[0][0] - base[0][0] == doctest::Approx(std::log(0.9)));
  CHECK(fd[0][1] - base[0][1] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("strategy fields") {
  const std::vector<double> x = {0.3, 0.7}, v = {1, 0};
  const auto r = player_field(FieldKind::kReplicator, 1.0, nullptr, x, v);
  CHECK(r[0] == doctest::Approx(0.21));
  CHECK(r[1] == doctest::Approx(-0.21));
  const auto p = player_field(FieldKind::kProjection, 1.0, nullptr, x, v);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(-0.5));

  std::mt19937_64 rng(101);
  const auto gibbs = Penalty::gibbs();
  const auto lb = Penalty::log_barrier();
  const auto ts = Penalty::tsallis(0.5);
  const auto quad = Penalty::quadratic();
  for (int rep = 0; rep < 200; ++rep) {
    const auto xs = oracle::random_interior(rng, 4, 1e-3);
    const auto vs = oracle::random_vector(rng, 4, -2, 2);
    const auto rep_f = player_field(FieldKind::kReplicator, 1.0, nullptr, xs, vs);
    CHECK(oracle::sup_diff(rep_f, replicator(xs, vs)) <= 1e-14);
    CHECK(oracle::sup_diff(player_field(FieldKind::kGenericRLD, 1.0, &gibbs, xs, vs), rep_f) <=
          1e-10);
    CHECK(oracle::sup_diff(player_field(FieldKind::kQReplicator, 1.0, nullptr, xs, vs), rep_f) ==
          0.0);
    CHECK(oracle::sup_diff(player_field(FieldKind::kQReplicator, 2.0, nullptr, xs, vs),
                           player_field(FieldKind::kProjection, 1.0, nullptr, xs, vs)) == 0.0);
    CHECK(oracle::sup_diff(player_field(FieldKind::kGenericRLD, 1.0, &lb, xs, vs),
                           player_field(FieldKind::kLogBarrier, 1.0, nullptr, xs, vs)) <= 1e-10);
    CHECK(oracle::sup_diff(player_field(FieldKind::kGenericRLD, 1.0, &ts, xs, vs),
                           player_field(FieldKind::kQReplicator, 0.5, nullptr, xs, vs)) <= 1e-10);
    CHECK(oracle::sup_diff(player_field(FieldKind::kGenericRLD, 1.0, &quad, xs, vs),
                           player_field(FieldKind::kProjection, 1.0, nullptr, xs, vs)) <= 1e-10);
    // Harmonic aggregate: x' = g (v - sum g v / sum g), g = 1/theta''.
    std::vector<double> g(4);
    for (int a = 0; a < 4; ++a) g[a] = 1.0 / ts.kernel_second_derivative(xs[a]);
    double num = 0.0, den = 0.0;
    for (int a = 0; a < 4; ++a) {
      num += g[a] * vs[a];
      den += g[a];
    }
    const auto gen = player_field(FieldKind::kGenericRLD, 1.0, &ts, xs, vs);
    for (int a = 0; a < 4; ++a) CHECK(gen[a] == doctest::Approx(g[a] * (vs[a] - num / den)));
  }
}

TEST_CASE("Renyi inverse Hessian and the q -> 1 limit") {
  std::mt19937_64 rng(103);
  const std::vector<int> face = {0, 1, 2};
  double worst_id = 0.0, worst_lim = 0.0;
  for (double q : {0.3, 0.7}) {
    const auto h = Penalty::renyi(q);
    for (int rep = 0; rep < 100; ++rep) {
      const auto x = oracle::random_interior(rng, 3, 1e-3);
      const Eigen::MatrixXd prod = h.inverse_face_hessian(x, face) * h.face_hessian(x, face);
      worst_id = std::max(worst_id, (prod - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff());
    }
  }
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = oracle::random_interior(rng, 3, 1e-3);
    const auto v = oracle::random_vector(rng, 3, -1, 1);
    const auto rep_f = replicator(x, v);
    for (double q : {0.99, 1.01}) {
      const auto f = player_field(FieldKind::kRenyi, q, nullptr, x, v);
      worst_lim = std::max(worst_lim, oracle::sup_diff(f, rep_f));
    }
    // Agreement with the generic inverse-Hessian field.
    const auto h = Penalty::renyi(0.5);
    CHECK(oracle::sup_diff(player_field(FieldKind::kRenyi, 0.5, nullptr, x, v),
                           player_field(FieldKind::kGenericRLD, 1.0, &h, x, v)) <= 1e-10);
  }
  CHECK(worst_id <= 1e-8);
  CHECK(worst_lim <= 0.05);
}

TEST_CASE("Erev-Roth and Cross fields") {
  const Game d = builtin_game("dominated2");
  const ScoreProfile y({2, 2}, std::vector<double>{1, 1, 1, 1});
  const auto f = erev_roth_field(d, y);
  CHECK(f[0][0] == doctest::Approx(0.5));
  CHECK(f[0][1] == doctest::Approx(0.0).scale(1.0));

  std::mt19937_64 rng(107);
  const Game g = random_game({3, 2}, rng, 0.05, 0.95);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x0 = oracle::random_interior(rng, 3, 0.0);
    const auto x1 = oracle::random_interior(rng, 2, 0.0);
    const StrategyProfile x(std::vector<Vector>{x0, x1});
    std::vector<double> v(5);
    all_payoff_vectors(g, x.flat(), v);
    const auto cross = cross_bs_field(g, x);
    const auto r0 = replicator(x0, std::span<const double>(v).subspan(0, 3));
    const auto r1 = replicator(x1, std::span<const double>(v).subspan(3, 2));
    for (int a = 0; a < 3; ++a) CHECK(std::abs(cross[a] - r0[a]) <= 1e-12);
    for (int a = 0; a < 2; ++a) CHECK(std::abs(cross[3 + a] - r1[a]) <= 1e-12);

    // Erev-Roth induced strategy motion is the replicator field over sum(y).
    std::vector<double> ys(5);
    const auto s0 = oracle::random_vector(rng, 1, 0.5, 3)[0];
    const auto s1 = oracle::random_vector(rng, 1, 0.5, 3)[0];
    for (int a = 0; a < 3; ++a) ys[a] = s0 * x0[a];
    for (int a = 0; a < 2; ++a) ys[3 + a] = s1 * x1[a];
    const auto er = erev_roth_field(g, ScoreProfile({3, 2}, ys));
    double sum0 = 0.0;
    for (int a = 0; a < 3; ++a) sum0 += er[0][a];
    for (int a = 0; a < 3; ++a) {
      const double xdot = (er[0][a] - x0[a] * sum0) / s0;
      CHECK(xdot == doctest::Approx(r0[a] / s0).epsilon(1e-10).scale(1e-12));
    }
  }
  DynamicsSpec cs;
  cs.variant = Variant::kCrossBS;
  CHECK_THROWS_AS(cs.validate(builtin_game("matching_pennies")), std::invalid_argument);
}

TEST_CASE("stationary start and row counts") {
  const Game mp = builtin_game("matching_pennies");
  const auto traj = integrate(mp, score_spec(Penalty::gibbs()), ScoreProfile({2, 2}), opts(100, 1e-3, 100));
  CHECK(traj.size() == 1001);
  CHECK(traj.time(traj.size() - 1) == doctest::Approx(100.0));
  double drift = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (double v : traj.x(i)) drift = std::max(drift, std::abs(v - 0.5));
  }
  CHECK(drift <= 1e-9);
  const auto full = integrate(mp, score_spec(Penalty::gibbs()), ScoreProfile({2, 2}), opts(1, 1e-2));
  CHECK(full.size() == 101);
  CHECK(full.integrator == "rk4");
}

TEST_CASE("closed-form solutions on the dominated game") {
  const Game d = builtin_game("dominated2");
  const auto quad = integrate(d, score_spec(Penalty::quadratic()), ScoreProfile({2, 2}),
                              opts(2, 1e-3));
  double worst = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double t = quad.time(i);
    const double expect = t <= 1 ? (1 - t) / 2 : 0.0;
    worst = std::max(worst, std::abs(quad.x(i)[1] - expect));
    if (t > 1) CHECK(quad.x(i)[1] == 0.0);
  }
  CHECK(worst <= 1e-12);

  const auto gibbs = integrate(d, score_spec(Penalty::gibbs()), ScoreProfile({2, 2}),
                               opts(10, 1e-3, 10));
  for (std::size_t i = 0; i < gibbs.size(); ++i) {
    const double t = gibbs.time(i);
    CHECK(gibbs.x(i)[1] == doctest::Approx(1 / (1 + std::exp(t))).epsilon(1e-9));
  }
}

TEST_CASE("score and strategy integration agree") {
  const Game mp = builtin_game("matching_pennies");
  struct Case {
    Penalty h;
    FieldKind field;
    double q;
  };
  const std::vector<Case> cases = {{Penalty::gibbs(), FieldKind::kReplicator, 1.0},
                                   {Penalty::tsallis(0.5), FieldKind::kQReplicator, 0.5},
                                   {Penalty::log_barrier(), FieldKind::kLogBarrier, 1.0},
                                   {Penalty::renyi(0.5), FieldKind::kRenyi, 0.5}};
  for (const auto& c : cases) {
    INFO(c.h.to_string());
    const StrategyProfile x0(std::vector<Vector>{{0.7, 0.3}, {0.4, 0.6}});
    ScoreProfile y0({2, 2});
    for (int k = 0; k < 2; ++k) {
      const auto yk = inverse_choice(c.h, x0[k]);
      y0[k][0] = yk[0];
      y0[k][1] = yk[1];
    }
    const auto a = integrate(mp, score_spec(c.h), y0, opts(10, 1e-3, 10));
    const auto b = integrate(mp, direct_spec(c.field, c.q), x0, opts(10, 1e-3, 10));
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, oracle::sup_diff(a.x(i), b.x(i)));
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("integrator matches an independent RK4 and has fourth order") {
  const Game mp = builtin_game("matching_pennies");
  const ScoreProfile y0({2, 2}, std::vector<double>{0.5, 0, 0, 0});
  auto end = [&](double dt) {
    const auto t = integrate(mp, score_spec(Penalty::gibbs()), y0, opts(10, dt));
    const auto x = t.x(t.size() - 1);
    return oracle::Vec(x.begin(), x.end());
  };
  auto rhs = [&](const oracle::Vec& y) {
    oracle::Vec x = oracle::logit(std::span<const double>(y).subspan(0, 2));
    const auto x2 = oracle::logit(std::span<const double>(y).subspan(2, 2));
    x.insert(x.end(), x2.begin(), x2.end());
    oracle::Vec v(4);
    for (int k = 0; k < 2; ++k) {
      const auto vk = oracle::payoff_vector(mp, k, x);
      v[2 * k] = vk[0];
      v[2 * k + 1] = vk[1];
    }
    return v;
  };
  const auto ref = oracle::rk4(rhs, {0.5, 0, 0, 0}, 0.01, 1000);
  const auto mine = integrate(mp, score_spec(Penalty::gibbs()), y0, opts(10, 0.01));
  CHECK(oracle::sup_diff(mine.y(mine.size() - 1), ref) <= 1e-12);

  const auto a = end(0.1), b = end(0.05), c = end(0.025);
  const double e1 = oracle::sup_diff(a, b), e2 = oracle::sup_diff(b, c);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("shift invariance of trajectories") {
  const Game g = builtin_game("rps");
  for (const auto& h : {Penalty::gibbs(), Penalty::quadratic(), Penalty::tsallis(1.5)}) {
    const ScoreProfile y0({3, 3}, std::vector<double>{0.2, -0.1, 0.4, 0.0, 0.3, -0.5});
    ScoreProfile shifted = y0;
    for (int a = 0; a < 3; ++a) shifted[0][a] += 7.0;
    for (int a = 0; a < 3; ++a) shifted[1][a] -= 3.0;
    const auto a = integrate(g, score_spec(h), y0, opts(5, 1e-2));
    const auto b = integrate(g, score_spec(h), shifted, opts(5, 1e-2));
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, oracle::sup_diff(a.x(i), b.x(i)));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("noise-level and discounted variants") {
  const Game mp = builtin_game("matching_pennies");
  DynamicsSpec noise = score_spec(Penalty::gibbs());
  noise.variant = Variant::kNoiseLevel;
  noise.rates = {2.0, 2.0};
  DynamicsSpec fast = score_spec(Penalty::gibbs());
  fast.rates = {2.0, 2.0};
  const ScoreProfile y0({2, 2}, std::vector<double>{0.25, 0, 0, 0});
  const ScoreProfile y0x2({2, 2}, std::vector<double>{0.5, 0, 0, 0});
  const auto a = integrate(mp, noise, y0, opts(5, 1e-3, 50));
  const auto b = integrate(mp, fast, y0x2, opts(5, 1e-3, 50));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, oracle::sup_diff(a.x(i), b.x(i)));
  CHECK(worst <= 1e-9);

  // lambda = 1 is the plain dynamics.
  DynamicsSpec one = score_spec(Penalty::gibbs());
  one.variant = Variant::kDiscounted;
  one.discount = 1.0;
  const auto c = integrate(mp, one, y0x2, opts(5, 1e-3, 50));
  const auto d0 = integrate(mp, score_spec(Penalty::gibbs()), y0x2, opts(5, 1e-3, 50));
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(oracle::sup_diff(c.x(i), d0.x(i)) == 0.0);

  // With discounting the dominated strategy survives: the score gap settles
  // at -1 / log(lambda).
  const Game dom = builtin_game("dominated2");
  DynamicsSpec disc = score_spec(Penalty::gibbs());
  disc.variant = Variant::kDiscounted;
  disc.discount = 0.5;
  const auto e = integrate(dom, disc, ScoreProfile({2, 2}), opts(60, 1e-2, 100));
  const double gap = -1.0 / std::log(0.5);
  CHECK(e.x(e.size() - 1)[1] == doctest::Approx(1 / (1 + std::exp(gap))).epsilon(1e-6));
}

TEST_CASE("heterogeneous penalties still eliminate the dominated strategy") {
  const Game d = builtin_game("dominated2");
  DynamicsSpec s;
  s.penalties = {Penalty::quadratic(), Penalty::gibbs()};
  const auto t = integrate(d, s, ScoreProfile({2, 2}), opts(3, 1e-3));
  CHECK(t.x(t.size() - 1)[1] == 0.0);
  DynamicsSpec s2;
  s2.penalties = {Penalty::gibbs(), Penalty::quadratic()};
  const auto t2 = integrate(d, s2, ScoreProfile({2, 2}), opts(10, 1e-3));
  CHECK(t2.x(t2.size() - 1)[1] <= 1e-4);
}

TEST_CASE("direct integration continues on smaller faces") {
  const Game c2 = builtin_game("coord2");
  const StrategyProfile x0(std::vector<Vector>{{0.9, 0.1}, {0.9, 0.1}});
  const auto t = integrate(c2, direct_spec(FieldKind::kProjection), x0, opts(2, 1e-3));
  CHECK(t.integrator == "rk4-direct");
  CHECK_FALSE(t.has_scores());
  CHECK(t.spec.extended_solution_mode());
  const auto last = t.x(t.size() - 1);
  CHECK(last[0] == 1.0);
  CHECK(last[1] == 0.0);
  REQUIRE(t.support_events.size() == 2);
  CHECK(t.support_events[0].action == 1);
  CHECK(t.support_events[0].t < 1.0);
  // Steep fields need an interior start.
  const StrategyProfile edge(std::vector<Vector>{{1.0, 0.0}, {0.5, 0.5}});
  CHECK_THROWS_AS(integrate(c2, direct_spec(FieldKind::kReplicator), edge, opts(1, 1e-2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(t.y(0), UnsupportedOperation);
}

TEST_CASE("Erev-Roth integration keeps positive scores") {
  const Game d = builtin_game("dominated2");
  DynamicsSpec er;
  er.variant = Variant::kErevRoth;
  const auto t = integrate(d, er, ScoreProfile({2, 2}, 1.0), opts(20, 1e-2));
  CHECK(t.x(t.size() - 1)[0] > 0.9);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (double v : t.y(i)) CHECK(v > 0);
  }
}

TEST_CASE("unpenalized dynamics") {
  DynamicsSpec url;
  url.variant = Variant::kUnpenalized;
  const Game d = builtin_game("dominated2");
  // Start with the dominated action ahead: it is dropped at t = 0.5.
  const ScoreProfile y0({2, 2}, std::vector<double>{0.0, 0.5, 0.0, 0.0});
  const auto t = integrate(d, url, y0, opts(5, 1e-3));
  CHECK(t.integrator == "euler");
  double last_selected = -1;
  for (const auto& e : t.selection_events) {
    if (e.player == 0 && e.actions == std::vector<int>{1}) last_selected = e.t;
  }
  CHECK(last_selected == 0.0);
  bool dropped = false;
  for (const auto& e : t.selection_events) {
    if (e.player == 0 && e.actions == std::vector<int>{0}) {
      dropped = true;
      CHECK(e.t == doctest::Approx(0.5).epsilon(1e-2));
    }
  }
  CHECK(dropped);
  CHECK(t.x(t.size() - 1)[0] == 1.0);

  // Warm-up start: the score/average identity holds every step.
  const Game mp = builtin_game("matching_pennies");
  const auto w = integrate_unpenalized(mp, url, std::nullopt, opts(50, 1e-3));
  CHECK(w.max_identity_error <= 1e-10);
  CHECK(w.has_averages());
  const auto avg = w.average(w.size() - 1);
  for (double v : avg) CHECK(std::abs(v - 0.5) <= 0.05);

  // Uniform tie-breaking mixes over maximizers.
  const auto sel = select_best(std::vector<double>{1.0, 1.0, 0.0}, TieRule::kUniform);
  CHECK(sel[0] == 0.5);
  CHECK(sel[1] == 0.5);
  const auto low = select_best(std::vector<double>{1.0, 1.0, 0.0}, TieRule::kLowestIndex);
  CHECK(low[0] == 1.0);
}

TEST_CASE("averaged unpenalized play follows best-response dynamics") {
  DynamicsSpec url;
  url.variant = Variant::kUnpenalized;
  url.warmup = 1.0;
  for (const char* name : {"coord2", "dominance_solvable3"}) {
    INFO(name);
    const Game g = builtin_game(name);
    const double T = 20.0;
    const auto u = integrate_unpenalized(g, url, std::nullopt, opts(T, 1e-3));
    // s = log((tau + t) / tau)
    const double S = std::log(1.0 + T);
    const auto b = integrate_brd(g, StrategyProfile::uniform(g.action_counts()),
                                 TieRule::kLowestIndex, opts(S, 1e-4));
    const auto xb = u.average(u.size() - 1);
    CHECK(oracle::sup_diff(xb, b.x(b.size() - 1)) <= 1e-2);
  }
}

TEST_CASE("trajectory bookkeeping") {
  Trajectory t({2, 2}, true);
  const std::vector<double> x = {0.5, 0.5, 0.5, 0.5}, y = {0, 0, 0, 0};
  t.append(0.0, x, y);
  CHECK_THROWS_AS(t.append(0.0, x, y), std::invalid_argument);
  CHECK_THROWS_AS(t.append(1.0, x), std::invalid_argument);
  t.append(1.0, x, y);
  CHECK(t.size() == 2);
  CHECK(t.strategy(1)[0][0] == 0.5);
  const Game mp = builtin_game("matching_pennies");
  DynamicsSpec bad = score_spec(Penalty::gibbs(), 3);
  CHECK_THROWS_AS(bad.validate(mp), std::invalid_argument);
}
