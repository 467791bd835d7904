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

#include <cmath>

#include "mfglab/equilibrium.h"
#include "mfglab/games.h"
#include "mfglab/learners.h"
#include "test_util.h"

namespace mfg {
namespace {

TEST_CASE("jfp: prisoners dilemma collapses to defect") {
  const GameSpec game = BuildGame("prisoners_dilemma");
  const LearningTrace trace = JfpRun(game, 5, StochasticPolicy::Uniform(game));
  const PolicyDistribution& last = trace.steps.back().nu;
  CHECK_EQ(last.size(), 1);
  CHECK_EQ(last.policies[0].action(0, 0), 1);
  const CorrelationDevice device = EmpiricalPlay(trace);
  CHECK_EQ(device.size(), 1);
  CHECK_EQ(device.weights[0], doctest::Approx(1.0));
}

TEST_CASE("jfp: dominated action never recommended") {
  const GameSpec game = BuildGame("dominated_action");
  const LearningTrace trace = JfpRun(game, 60, StochasticPolicy::Uniform(game));
  for (const auto& step : trace.steps) {
    CHECK_EQ(step.nu.WeightOf(DeterministicPolicy::Constant(game, 2)), 0.0);
  }
}

TEST_CASE("jfp: suits converges to B from a B-heavy start") {
  const GameSpec game = BuildGame("suits");
  const LearningTrace trace =
      JfpRun(game, 50, StochasticPolicy::FromRow(game, {0.1, 0.9}));
  const PolicyDistribution& last = trace.steps.back().nu;
  CHECK_EQ(last.size(), 1);
  CHECK_EQ(last.policies[0].action(0, 0), 1);
}

TEST_CASE("jfp trace flows are population flows of the recommendations") {
  const GameSpec game = BuildGame("biased_rps");
  const LearningTrace trace = JfpRun(game, 40, StochasticPolicy::Uniform(game));
  for (const auto& step : trace.steps) {
    CHECK_LE(LinfDistance(AggregateFlow(game, step.nu).rows, step.flow.rows),
             1e-10);
  }
}

TEST_CASE("jfp runs on mu-dependent dynamics") {
  const GameSpec game = BuildGame("hole_trap");
  const LearningTrace trace = JfpRun(game, 25, StochasticPolicy::Uniform(game));
  CHECK_EQ(trace.steps.size(), 25);
  for (const auto& step : trace.steps) {
    CHECK_LE(LinfDistance(AggregateFlow(game, step.nu).rows, step.flow.rows),
             1e-10);
  }
}

TEST_CASE("omd: dominated action decays at the analytic rate") {
  const GameSpec game = BuildGame("dominated_action");
  const double eta = 0.1;
  const LearningTrace trace = OmdRun(game, 200, eta);
  for (const auto& step : trace.steps) {
    const double ratio = step.flow.row(0)[2] / step.flow.row(0)[0];
    const double expected = std::exp(-0.05 * eta * step.iteration);
    CHECK_EQ(ratio, doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("omd: almost-dominated C survives after B dies off") {
  const GameSpec game = BuildGame("almost_dominated_action");
  const LearningTrace trace = OmdRun(game, 3000, 0.1);
  const Vec& final_marginal = trace.steps.back().flow.row(0);
  CHECK_LE(final_marginal[1], 1e-3);   // B extinguished
  CHECK_GE(final_marginal[2], 0.05);   // C retained
  // Once B is gone the A:C ratio freezes.
  const Vec& late = trace.steps[trace.steps.size() - 500].flow.row(0);
  CHECK_EQ(final_marginal[2] / final_marginal[0],
           doctest::Approx(late[2] / late[0]).epsilon(1e-2));
}

TEST_CASE("omd: biased rps last iterate cycles") {
  const GameSpec game = BuildGame("biased_rps");
  const LearningTrace trace = OmdRun(game, 2000, 0.1);
  double last_move = 0.0;
  for (size_t j = trace.steps.size() - 100; j < trace.steps.size(); ++j) {
    last_move = std::max(last_move,
                         LinfDistance(trace.steps[j].flow.rows,
                                      trace.steps[j - 1].flow.rows));
  }
  CHECK_GE(last_move, 1e-3);  // no last-iterate convergence
}

TEST_CASE("omd: biased rps average regret decays") {
  // Fixed-step OMD plateaus at Theta(eta) average regret; eta = 0.02
  // keeps the discretization on the continuous-time O(1/t) rate at this
  // horizon.
  const GameSpec game = BuildGame("biased_rps");
  const LearningTrace trace = OmdRun(game, 2000, 0.02);
  const Vec prefixes = ExternalRegretPrefixes(game, trace);
  CHECK_LE(prefixes[1999] / 2000.0, 0.6 * prefixes[499] / 500.0);
}

TEST_CASE("empirical_play: merging and errors") {
  const GameSpec game = BuildGame("hipster");
  LearningTrace empty;
  CHECK_THROWS_AS(EmpiricalPlay(empty), EmptyTrace);

  LearningTrace trace;
  TraceStep step;
  step.nu = test::UniformOverActions(game);
  step.flow = AggregateFlow(game, step.nu);
  step.payoff = MixturePayoff(game, step.nu, step.flow);
  trace.steps = {step, step};
  const CorrelationDevice device = EmpiricalPlay(trace);
  CHECK_EQ(device.size(), 1);
  CHECK_EQ(device.weights[0], doctest::Approx(1.0));
}

TEST_CASE("external regret: constant-reward game and self-best-response") {
  const GameSpec constant = test::ConstantRewardGame(3, 0.7);
  const LearningTrace trace = JfpRun(constant, 10, StochasticPolicy::Uniform(constant));
  CHECK_LE(std::abs(ExternalRegret(constant, trace)), 1e-12);

  const GameSpec hipster = BuildGame("hipster");
  LearningTrace single;
  TraceStep step;
  step.nu = test::UniformOverActions(hipster);
  step.flow = AggregateFlow(hipster, step.nu);
  step.payoff = MixturePayoff(hipster, step.nu, step.flow);
  single.steps = {step};
  // The uniform mixture is a best response to its own flow.
  CHECK_LE(std::abs(ExternalRegret(hipster, single)), 1e-12);
}

TEST_CASE("swap regret: nash dirac trace and the uniform-dirac rps trace") {
  const GameSpec hipster = BuildGame("hipster");
  LearningTrace nash;
  TraceStep step;
  step.nu = test::UniformOverActions(hipster);
  step.flow = AggregateFlow(hipster, step.nu);
  step.payoff = MixturePayoff(hipster, step.nu, step.flow);
  nash.steps = {step};
  CHECK_LE(std::abs(SwapRegret(hipster, nash)), 1e-12);

  const GameSpec rps = BuildGame("mf_rps_discontinuous");
  LearningTrace pure_cycle;
  for (int a = 0; a < 3; ++a) {
    TraceStep s;
    s.nu = PolicyDistribution::Dirac(DeterministicPolicy::Constant(rps, a));
    s.flow = AggregateFlow(rps, s.nu);
    s.payoff = MixturePayoff(rps, s.nu, s.flow);
    pure_cycle.steps.push_back(std::move(s));
  }
  CHECK_EQ(SwapRegret(rps, pure_cycle), doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("regret-gap identities on solver traces") {
  RandomStream rng(101);
  for (const char* name : {"hipster", "suits", "biased_rps", "dominated_action",
                           "mf_rps_discontinuous"}) {
    const GameSpec game = BuildGame(name);
    for (int round = 0; round < 2; ++round) {
      const int iters = 5 + rng.NextInt(40);
      const LearningTrace trace =
          round == 0 ? JfpRun(game, iters, test::RandomStochasticPolicy(rng, game))
                     : OmdRun(game, iters, 0.05 + rng.NextDouble());
      const CorrelationDevice device = EmpiricalPlay(trace);
      const double steps = static_cast<double>(trace.steps.size());
      CHECK_EQ(ExternalRegret(game, trace) / steps,
               doctest::Approx(CceGap(game, device).gap).epsilon(1e-10));
      CHECK_EQ(SwapRegret(game, trace) / steps,
               doctest::Approx(CeGap(game, device).gap).epsilon(1e-10));
      CHECK_LE(ExternalRegret(game, trace),
               SwapRegret(game, trace) + 1e-10);
    }
  }
}

TEST_CASE("regret-gap identities hold on a mu-dependent game") {
  const GameSpec game = BuildGame("hole_trap");
  const LearningTrace trace = JfpRun(game, 30, StochasticPolicy::Uniform(game));
  const CorrelationDevice device = EmpiricalPlay(trace);
  const double steps = static_cast<double>(trace.steps.size());
  CHECK_EQ(ExternalRegret(game, trace) / steps,
           doctest::Approx(CceGap(game, device).gap).epsilon(1e-10));
  CHECK_EQ(SwapRegret(game, trace) / steps,
           doctest::Approx(CeGap(game, device).gap).epsilon(1e-10));
}

TEST_CASE("jfp and omd regret decay on the continuous-reward games") {
  // The discontinuous fixtures (reward_for_the_few, both mf_rps variants)
  // break the continuity the O(1/t) guarantees assume, and their average
  // regret stalls structurally.
  for (const char* name : {"hipster", "suits", "dominated_action",
                           "almost_dominated_action", "biased_rps",
                           "prisoners_dilemma"}) {
    const GameSpec game = BuildGame(name);
    {
      const LearningTrace trace =
          JfpRun(game, 2000, StochasticPolicy::Uniform(game));
      const Vec prefixes = ExternalRegretPrefixes(game, trace);
      const double early = prefixes[499] / 500.0;
      const double late = prefixes[1999] / 2000.0;
      CHECK_LE(late, 0.6 * std::max(early, 1e-15));
    }
    {
      const LearningTrace trace = OmdRun(game, 2000, 0.02);
      const Vec prefixes = ExternalRegretPrefixes(game, trace);
      const double early = prefixes[499] / 500.0;
      const double late = prefixes[1999] / 2000.0;
      CHECK_LE(late, 0.6 * std::max(early, 1e-15));
    }
  }
}

TEST_CASE("omd: a B-biased dual start converges to B on almost-dominated") {
  const GameSpec game = BuildGame("almost_dominated_action");
  QTable y0 = QTable::Zeros(game);
  y0.at(0, 0, 1) = 2.0;
  const LearningTrace trace = OmdRun(game, 2000, 0.1, y0);
  CHECK_GE(trace.steps.back().flow.row(0)[1], 0.99);
}

TEST_CASE("omd trace of a large dynamic game refuses device extraction") {
  const GameSpec game = BuildGame("hole_trap");
  const LearningTrace trace = OmdRun(game, 3, 0.1, std::nullopt, 16);
  CHECK_EQ(trace.steps.size(), 3);
  for (const auto& step : trace.steps) CHECK_EQ(step.nu.size(), 0);
  CHECK_THROWS_AS(EmpiricalPlay(trace), SupportTooLarge);
}

}  // namespace
}  // namespace mfg
