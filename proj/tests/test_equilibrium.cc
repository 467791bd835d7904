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
#include "test_util.h"

namespace mfg {
namespace {

using test::RandomDevice;
using test::RandomStaticGame;
using test::UniformOverActions;

DeterministicPolicy Pure(const GameSpec& game, int action) {
  return DeterministicPolicy::Constant(game, action);
}

CorrelationDevice UniformDiracDevice(const GameSpec& game) {
  CorrelationDevice rho;
  for (int a = 0; a < game.num_actions; ++a) {
    rho.atoms.push_back(PolicyDistribution::Dirac(Pure(game, a)));
    rho.weights.push_back(1.0 / game.num_actions);
  }
  return rho;
}

// rho = 1/2 on {1/2 P + 1/2 R}, 1/2 on {all P}; the worked CE device of
// the discontinuous mean-field rock-paper-scissors game.
CorrelationDevice RpsCeDevice(const GameSpec& game) {
  PolicyDistribution half_pr;
  half_pr.policies = {Pure(game, 0), Pure(game, 1)};  // R, P
  half_pr.weights = {0.5, 0.5};
  CorrelationDevice rho;
  rho.atoms = {half_pr, PolicyDistribution::Dirac(Pure(game, 1))};
  rho.weights = {0.5, 0.5};
  return rho;
}

TEST_CASE("exploitability: hipster uniform and suits all-in are Nash") {
  const GameSpec hipster = BuildGame("hipster");
  CHECK_EQ(Exploitability(hipster, UniformOverActions(hipster)).gap,
           doctest::Approx(0.0).epsilon(1e-12));

  const GameSpec suits = BuildGame("suits");
  CHECK_EQ(Exploitability(suits, PolicyDistribution::Dirac(Pure(suits, 0))).gap,
           doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("exploitability: reward-for-the-few half split") {
  const GameSpec game = BuildGame("reward_for_the_few");
  const GapReport report = Exploitability(game, UniformOverActions(game));
  CHECK_EQ(report.gap, doctest::Approx(0.5).epsilon(1e-12));
  CHECK_EQ(report.deviation->action(0, 0), 1);  // witness b
}

TEST_CASE("cce_gap: nash dirac, uniform-dirac rps, and the few device") {
  const GameSpec hipster = BuildGame("hipster");
  CHECK_LE(std::abs(CceGap(hipster,
                           CorrelationDevice::Dirac(UniformOverActions(hipster)))
                        .gap),
           1e-12);

  const GameSpec rps = BuildGame("mf_rps_discontinuous");
  CHECK_LE(std::abs(CceGap(rps, UniformDiracDevice(rps)).gap), 1e-12);

  const GameSpec few = BuildGame("reward_for_the_few");
  CHECK_EQ(CceGap(few, CorrelationDevice::Dirac(UniformOverActions(few))).gap,
           doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ce_gap: worked rps device is a CE with -1/3 conditionals") {
  const GameSpec game = BuildGame("mf_rps_discontinuous");
  const CorrelationDevice rho = RpsCeDevice(game);
  CHECK_LE(std::abs(CeGap(game, rho).gap), 1e-12);

  // Conditional deviation payoffs from P, to S and to R.
  const CorrelationDevice conditional = ConditionalDevice(rho, Pure(game, 1));
  double to_s = 0.0, to_r = 0.0, stay = 0.0;
  for (int k = 0; k < conditional.size(); ++k) {
    const MeanFieldFlow flow = AggregateFlow(game, conditional.atoms[k]);
    to_s += conditional.weights[k] * Payoff(game, Pure(game, 2), flow);
    to_r += conditional.weights[k] * Payoff(game, Pure(game, 0), flow);
    stay += conditional.weights[k] * Payoff(game, Pure(game, 1), flow);
  }
  CHECK_EQ(to_s, doctest::Approx(-1.0 / 3).epsilon(1e-12));
  CHECK_EQ(to_r, doctest::Approx(-1.0 / 3).epsilon(1e-12));
  CHECK_EQ(stay, doctest::Approx(-1.0 / 3).epsilon(1e-12));
}

TEST_CASE("ce_gap: uniform-dirac rps has gap one; suits alternation is a CE") {
  const GameSpec rps = BuildGame("mf_rps_discontinuous");
  CHECK_EQ(CeGap(rps, UniformDiracDevice(rps)).gap,
           doctest::Approx(1.0).epsilon(1e-12));

  const GameSpec suits = BuildGame("suits");
  CHECK_LE(std::abs(CeGap(suits, UniformDiracDevice(suits)).gap), 1e-12);
}

TEST_CASE("ordered rps: uniform-dirac device is a CCE but no CE exists") {
  // Every recommendation exposes a profitable swap one step up the
  // pecking order, while fixed deviations all net zero.
  const GameSpec game = BuildGame("mf_rps_ordered");
  const CorrelationDevice rho = UniformDiracDevice(game);
  CHECK_LE(std::abs(CceGap(game, rho).gap), 1e-12);
  CHECK_EQ(CeGap(game, rho).gap, doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gap reports recompute from their witnesses") {
  const GameSpec rps = BuildGame("mf_rps_discontinuous");
  const CorrelationDevice rho = UniformDiracDevice(rps);

  const GapReport ce = CeGap(rps, rho);
  CHECK_EQ(SwapAdvantage(rps, rho, *ce.swap), doctest::Approx(ce.gap).epsilon(1e-12));

  const GapReport cce = CceGap(rps, rho);
  PolicySwap constant;
  for (const auto& policy : DeviceSupport(rho)) {
    constant.mapping.emplace_back(policy, *cce.deviation);
  }
  CHECK_EQ(SwapAdvantage(rps, rho, constant), doctest::Approx(cce.gap).epsilon(1e-12));
}

TEST_CASE("homogeneous_ce_gap: suits alternation, pure-C dominated, nash atoms") {
  const GameSpec suits = BuildGame("suits");
  HomogeneousDevice alternating;
  alternating.atoms = {ToStochastic(suits, Pure(suits, 0)),
                       ToStochastic(suits, Pure(suits, 1))};
  alternating.weights = {0.5, 0.5};
  CHECK_LE(std::abs(HomogeneousCeGap(suits, alternating).gap), 1e-12);

  const GameSpec dominated = BuildGame("dominated_action");
  HomogeneousDevice pure_c;
  pure_c.atoms = {ToStochastic(dominated, Pure(dominated, 2))};
  pure_c.weights = {1.0};
  const GapReport report = HomogeneousCeGap(dominated, pure_c);
  CHECK_EQ(report.gap, doctest::Approx(0.05).epsilon(1e-12));
  CHECK_EQ(report.per_atom[0], doctest::Approx(0.05).epsilon(1e-12));

  const GameSpec hipster = BuildGame("hipster");
  HomogeneousDevice nash;
  nash.atoms = {StochasticPolicy::FromRow(hipster, {0.5, 0.5})};
  nash.weights = {1.0};
  CHECK_LE(std::abs(HomogeneousCeGap(hipster, nash).gap), 1e-12);
}

TEST_CASE("homogeneous gap weighs only the exploitable atoms") {
  const GameSpec game = BuildGame("hipster");
  HomogeneousDevice mixed;
  mixed.atoms = {StochasticPolicy::FromRow(game, {0.5, 0.5}),   // Nash
                 StochasticPolicy::FromRow(game, {1.0, 0.0})};  // exploitable
  mixed.weights = {0.75, 0.25};
  const GapReport report = HomogeneousCeGap(game, mixed);
  CHECK_LE(std::abs(report.per_atom[0]), 1e-12);
  // All-A flow pays -1 while deviating to B pays 0.
  CHECK_EQ(report.per_atom[1], doctest::Approx(1.0).epsilon(1e-12));
  CHECK_EQ(report.gap, doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("conditional_device: single atom, worked weights, zero-mass error") {
  const GameSpec game = BuildGame("mf_rps_discontinuous");
  const CorrelationDevice single =
      CorrelationDevice::Dirac(PolicyDistribution::Dirac(Pure(game, 0)));
  const CorrelationDevice conditional = ConditionalDevice(single, Pure(game, 0));
  CHECK_EQ(conditional.size(), 1);
  CHECK_EQ(conditional.weights[0], doctest::Approx(1.0));

  const CorrelationDevice rho = RpsCeDevice(game);
  const CorrelationDevice given_p = ConditionalDevice(rho, Pure(game, 1));
  CHECK_EQ(given_p.size(), 2);
  CHECK_EQ(given_p.weights[0], doctest::Approx(1.0 / 3));
  CHECK_EQ(given_p.weights[1], doctest::Approx(2.0 / 3));

  CHECK_THROWS_AS(ConditionalDevice(rho, Pure(game, 2)), ZeroMassRecommendation);
}

TEST_CASE("consistency_check: single atom, equal-flow grouping") {
  const GameSpec game = BuildGame("biased_rps");
  const auto single = ConsistencyCheck(
      game, CorrelationDevice::Dirac(UniformOverActions(game)));
  CHECK_EQ(single.size(), 1);
  CHECK_EQ(single[0].residual, doctest::Approx(0.0));

  // Two distinct recommendations with the same aggregate flow on a
  // mu-dependent game: both halves still fall in the hole.
  const GameSpec trap = BuildGame("hole_trap");
  PolicyDistribution lr;
  lr.policies = {Pure(trap, 0), Pure(trap, 1)};
  lr.weights = {0.5, 0.5};
  PolicyDistribution rl;
  rl.policies = {Pure(trap, 0), Pure(trap, 1)};
  rl.weights = {0.5 + 1e-13, 0.5 - 1e-13};
  CorrelationDevice rho;
  rho.atoms = {lr, rl};
  rho.weights = {0.5, 0.5};
  const auto groups = ConsistencyCheck(trap, rho);
  CHECK_EQ(groups.size(), 1);
  CHECK_LE(groups[0].residual, 1e-9);
}

TEST_CASE("find_strictly_dominant: prisoners dilemma, hipster, single action") {
  const auto pd = FindStrictlyDominant(BuildGame("prisoners_dilemma"), 50);
  REQUIRE(pd.has_value());
  CHECK_EQ(pd->first.action(0, 0), 1);
  CHECK_EQ(pd->second, doctest::Approx(1.0).epsilon(1e-9));

  CHECK_FALSE(FindStrictlyDominant(BuildGame("hipster"), 50).has_value());

  const GameSpec lonely = test::ConstantRewardGame(1, 0.25);
  const auto only = FindStrictlyDominant(lonely, 10);
  REQUIRE(only.has_value());
  CHECK_EQ(only->second, 0.0);
}

TEST_CASE("nash_to_device and device_to_nash round trip and errors") {
  const GameSpec hipster = BuildGame("hipster");
  const PolicyDistribution nash = UniformOverActions(hipster);
  const CorrelationDevice device = NashToDevice(nash);
  CHECK_LE(std::abs(CceGap(hipster, device).gap), 1e-12);
  CHECK(DeviceToNash(device) == nash);

  const GameSpec suits = BuildGame("suits");
  CHECK_LE(std::abs(CeGap(suits, NashToDevice(PolicyDistribution::Dirac(
                                     Pure(suits, 0))))
                        .gap),
           1e-12);

  const GameSpec few = BuildGame("reward_for_the_few");
  CorrelationDevice two_atoms;
  two_atoms.atoms = {PolicyDistribution::Dirac(Pure(few, 0)),
                     PolicyDistribution::Dirac(Pure(few, 1))};
  two_atoms.weights = {0.5, 0.5};
  CHECK_THROWS_AS(DeviceToNash(two_atoms), NotADirac);
}

TEST_CASE("wrapped nash: cce gap equals exploitability exactly") {
  RandomStream rng(51);
  for (int round = 0; round < 25; ++round) {
    const GameSpec game = RandomStaticGame(rng, 2 + rng.NextInt(2));
    const CorrelationDevice device = RandomDevice(rng, game, 1, 3);
    const PolicyDistribution& nu = device.atoms[0];
    const double exploitability = Exploitability(game, nu).gap;
    const double cce = CceGap(game, NashToDevice(nu)).gap;
    CHECK_EQ(cce, doctest::Approx(exploitability).epsilon(1e-12));
    // Nash-derived CE bound: |support| times the exploitability.
    const double ce = CeGap(game, NashToDevice(nu)).gap;
    CHECK_LE(ce, exploitability * nu.size() + 1e-12);
  }
}

TEST_CASE("nesting: cce gap never exceeds ce gap") {
  RandomStream rng(53);
  for (const auto& name : RegisteredGames()) {
    if (name == "hole_trap") continue;
    const GameSpec game = BuildGame(name);
    for (int round = 0; round < 6; ++round) {
      const CorrelationDevice rho = RandomDevice(rng, game, 3, 3);
      CHECK_LE(CceGap(game, rho).gap, CeGap(game, rho).gap + 1e-12);
    }
  }
}

TEST_CASE("convexity of gaps in the device") {
  RandomStream rng(59);
  for (int round = 0; round < 10; ++round) {
    const GameSpec game = RandomStaticGame(rng, 3);
    const CorrelationDevice rho0 = RandomDevice(rng, game, 2, 3);
    const CorrelationDevice rho1 = RandomDevice(rng, game, 2, 3);
    const double ce0 = CeGap(game, rho0).gap;
    const double ce1 = CeGap(game, rho1).gap;
    const double cce0 = CceGap(game, rho0).gap;
    const double cce1 = CceGap(game, rho1).gap;
    for (double alpha : {0.25, 0.5, 0.75}) {
      CorrelationDevice mix;
      for (int k = 0; k < rho0.size(); ++k) {
        mix.atoms.push_back(rho0.atoms[k]);
        mix.weights.push_back(alpha * rho0.weights[k]);
      }
      for (int k = 0; k < rho1.size(); ++k) {
        mix.atoms.push_back(rho1.atoms[k]);
        mix.weights.push_back((1.0 - alpha) * rho1.weights[k]);
      }
      CHECK_LE(CeGap(game, mix).gap, alpha * ce0 + (1 - alpha) * ce1 + 1e-10);
      CHECK_LE(CceGap(game, mix).gap, alpha * cce0 + (1 - alpha) * cce1 + 1e-10);
    }
  }
}

TEST_CASE("two-action one-state games: the ce and cce epsilon-sets agree") {
  // Set-level equality: membership thresholds only see the positive
  // part of the cce gap (a negative gap means every fixed deviation is
  // strictly harmful).
  RandomStream rng(61);
  for (int round = 0; round < 30; ++round) {
    const GameSpec game = RandomStaticGame(rng, 2);
    const CorrelationDevice rho = RandomDevice(rng, game, 3, 2);
    CHECK_EQ(CeGap(game, rho).gap,
             doctest::Approx(std::max(0.0, CceGap(game, rho).gap))
                 .epsilon(1e-12));
  }
}

TEST_CASE("cce gap is negative when correlation beats every fixed policy") {
  const GameSpec suits = BuildGame("suits");
  CorrelationDevice alternating;
  alternating.atoms = {PolicyDistribution::Dirac(Pure(suits, 0)),
                       PolicyDistribution::Dirac(Pure(suits, 1))};
  alternating.weights = {0.5, 0.5};
  CHECK_EQ(CceGap(suits, alternating).gap, doctest::Approx(-0.5));
  CHECK_LE(std::abs(CeGap(suits, alternating).gap), 1e-12);
}

// Independent oracle: maximum advantage over every explicit swap map.
double BruteForceCeGap(const GameSpec& game, const CorrelationDevice& rho) {
  const auto all = EnumerateDeterministicPolicies(game, 64);
  const int n = static_cast<int>(all.size());
  std::vector<MeanFieldFlow> flows;
  for (const auto& nu : rho.atoms) flows.push_back(AggregateFlow(game, nu));

  std::vector<int> map(n, 0);
  double best = -1e300;
  while (true) {
    double advantage = 0.0;
    for (int k = 0; k < rho.size(); ++k) {
      const auto& nu = rho.atoms[k];
      for (int i = 0; i < nu.size(); ++i) {
        int index = 0;
        for (int p = 0; p < n; ++p) {
          if (all[p] == nu.policies[i]) index = p;
        }
        advantage += rho.weights[k] * nu.weights[i] *
                     (Payoff(game, all[map[index]], flows[k]) -
                      Payoff(game, nu.policies[i], flows[k]));
      }
    }
    best = std::max(best, advantage);
    int digit = 0;
    while (digit < n && map[digit] == n - 1) map[digit++] = 0;
    if (digit == n) break;
    ++map[digit];
  }
  return best;
}

TEST_CASE("brute-force swap oracle pins the ce decomposition") {
  RandomStream rng(67);
  for (int round = 0; round < 40; ++round) {
    const GameSpec game = RandomStaticGame(rng, 2 + rng.NextInt(2));
    const CorrelationDevice rho = RandomDevice(rng, game, 3, 3);
    CHECK_EQ(CeGap(game, rho).gap,
             doctest::Approx(BruteForceCeGap(game, rho)).epsilon(1e-12));
  }
}

TEST_CASE("dominant-strategy devices: off-D mass is linearly punished") {
  const GameSpec game = BuildGame("prisoners_dilemma");
  RandomStream rng(71);
  for (double epsilon : {0.05, 0.2, 0.5}) {
    PolicyDistribution nu;
    nu.policies = {Pure(game, 0), Pure(game, 1)};  // C, D
    nu.weights = {epsilon, 1.0 - epsilon};
    const double gap = CceGap(game, CorrelationDevice::Dirac(nu)).gap;
    // J(D, mu) - J(C, mu) = 1 identically, so the gap is the C-mass.
    CHECK_EQ(gap, doctest::Approx(epsilon).epsilon(1e-12));
    CHECK_GE(gap, epsilon - 1e-12);
  }
}

}  // namespace
}  // namespace mfg
