// Copyright 2026 The mfglab Authors.
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

#include <doctest.h>

#include <set>

#include "mfglab/equilibrium.h"
#include "mfglab/games.h"
#include "mfglab/psro.h"

namespace mfg {
namespace {

DeterministicPolicy Pure(const GameSpec& game, int action) {
  return DeterministicPolicy::Constant(game, action);
}

TEST_CASE("inner bandit: singleton pool finishes in one round") {
  const GameSpec game = BuildGame("hipster");
  auto solver = MakeMetaSolver(MetaSolverKind::kRegretMatching, 1, 0.1);
  const InnerBanditResult result =
      InnerBandit(game, {Pure(game, 0)}, *solver, false, 0.01, 100);
  CHECK(result.reached_epsilon);
  CHECK_EQ(result.rounds, 1);
  CHECK_EQ(result.average_regret, doctest::Approx(0.0));
  CHECK_EQ(result.device.size(), 1);
}

TEST_CASE("inner bandit: rm reaches a small gap on the full rps pool") {
  const GameSpec game = BuildGame("biased_rps");
  std::vector<DeterministicPolicy> pool = {Pure(game, 0), Pure(game, 1),
                                           Pure(game, 2)};
  auto solver = MakeMetaSolver(MetaSolverKind::kRegretMatching, 3, 0.1);
  const InnerBanditResult result =
      InnerBandit(game, pool, *solver, false, 0.01, 100000);
  CHECK(result.reached_epsilon);
  CHECK_LE(CceGap(game, result.device).gap, 0.01 + 1e-9);
}

TEST_CASE("inner bandit: pw concentrates on A when B is the only rival") {
  // The exact uniform point is an indifferent fixed point of the {A, B}
  // subgame (r(A) = p_A, r(B) = p_B), so tip the solver slightly toward
  // A first; from any A-favored point, A dominates along the trajectory.
  const GameSpec game = BuildGame("dominated_action");
  std::vector<DeterministicPolicy> pool = {Pure(game, 0), Pure(game, 1)};
  auto solver = MakeMetaSolver(MetaSolverKind::kPolynomialWeights, 2, 0.1);
  solver->Observe({0.5, 0.0});
  const InnerBanditResult result =
      InnerBandit(game, pool, *solver, false, 1e-4, 200000);
  CHECK(result.reached_epsilon);
  const double a_mass = RecommendationMass(result.device, Pure(game, 0));
  CHECK_GE(a_mass, 0.9);

  // From exact uniform both solvers sit still: a legitimate zero-regret
  // point of the restricted game.
  auto frozen = MakeMetaSolver(MetaSolverKind::kPolynomialWeights, 2, 0.1);
  const InnerBanditResult stuck =
      InnerBandit(game, pool, *frozen, false, 0.005, 100);
  CHECK(stuck.reached_epsilon);
  CHECK_EQ(RecommendationMass(stuck.device, Pure(game, 0)), doctest::Approx(0.5));
}

TEST_CASE("inner bandit exhausts rounds without reaching epsilon") {
  const GameSpec game = BuildGame("biased_rps");
  std::vector<DeterministicPolicy> pool = {Pure(game, 0), Pure(game, 1),
                                           Pure(game, 2)};
  auto solver = MakeMetaSolver(MetaSolverKind::kRegretMatching, 3, 0.1);
  const InnerBanditResult result =
      InnerBandit(game, pool, *solver, false, 1e-9, 50);
  CHECK_FALSE(result.reached_epsilon);
  CHECK_EQ(result.rounds, 50);
  CHECK_GT(result.average_regret, 1e-9);
}

TEST_CASE("psro cce: prisoners dilemma grows defect and nails the gap") {
  const GameSpec game = BuildGame("prisoners_dilemma");
  PsroConfig config;
  config.mode = PsroMode::kCce;
  config.solver = MetaSolverKind::kRegretMatching;
  // Regret matching forgets its exploratory first round at rate 1/t, so
  // the empirical device carries O(epsilon) mass off defect.
  config.epsilon = 1e-5;
  const PsroResult result = PsroRun(game, config, {Pure(game, 0)});
  CHECK(result.converged);
  CHECK_EQ(result.pool.size(), 2);
  CHECK_LE(result.final_cce_gap, 2e-5);
  CHECK_GE(RecommendationMass(result.device, Pure(game, 1)), 1.0 - 1e-4);
}

TEST_CASE("psro pool growth is duplicate-free and strictly increasing") {
  const GameSpec game = BuildGame("biased_rps");
  PsroConfig config;
  config.mode = PsroMode::kCce;
  config.solver = MetaSolverKind::kRegretMatching;
  config.epsilon = 0.01;
  const PsroResult result = PsroRun(game, config, {Pure(game, 0)});
  std::set<DeterministicPolicy> distinct(result.pool.begin(), result.pool.end());
  CHECK_EQ(distinct.size(), result.pool.size());
  for (size_t i = 1; i < result.outer_records.size(); ++i) {
    CHECK_GT(result.outer_records[i].pool_size,
             result.outer_records[i - 1].pool_size);
  }
  CHECK(result.converged);
  CHECK_LE(result.final_cce_gap, config.epsilon + config.improvement_tol + 1e-9);
}

TEST_CASE("psro ce with the swap wrapper reaches a small ce gap") {
  const GameSpec game = BuildGame("biased_rps");
  PsroConfig config;
  config.mode = PsroMode::kCe;
  config.solver = MetaSolverKind::kSwapRM;
  config.epsilon = 0.01;
  const PsroResult result = PsroRun(game, config, {Pure(game, 0)});
  CHECK(result.converged);
  CHECK_LE(result.final_ce_gap, 0.02);
}

TEST_CASE("optimality modification drops an injected dominated policy") {
  const GameSpec game = BuildGame("dominated_action");
  PsroConfig config;
  config.mode = PsroMode::kCce;
  config.solver = MetaSolverKind::kRegretMatching;
  config.epsilon = 0.005;
  config.drop_init = true;
  const PsroResult result = PsroRun(game, config, {Pure(game, 2)});
  // After round one the pool holds best responses only, so the dominated
  // policy is gone from both the pool and the final device.
  for (const auto& policy : result.pool) {
    CHECK_NE(policy.action(0, 0), 2);
  }
  CHECK_EQ(RecommendationMass(result.device, Pure(game, 2)), 0.0);
}

TEST_CASE("returned devices verify at the claimed gap") {
  const GameSpec game = BuildGame("suits");
  PsroConfig config;
  config.mode = PsroMode::kCce;
  config.solver = MetaSolverKind::kPolynomialWeights;
  config.eta = 0.1;
  config.epsilon = 0.01;
  const PsroResult result = PsroRun(game, config, {Pure(game, 0)});
  const double verified = CceGap(game, result.device).gap;
  CHECK_LE(verified, config.epsilon + config.improvement_tol + 1e-9);
  CHECK_EQ(verified, doctest::Approx(result.final_cce_gap).epsilon(1e-12));
}

}  // namespace
}  // namespace mfg
