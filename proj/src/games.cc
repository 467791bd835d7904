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

#include "mfglab/games.h"

#include <cmath>

namespace mfg {

namespace {

constexpr double kDiracTol = 1e-9;  // max entry >= 1 - kDiracTol is a Dirac

double Param(const GameId& id, const std::string& key, double fallback) {
  auto it = id.params.find(key);
  return it == id.params.end() ? fallback : it->second;
}

// Actions 0 = A, 1 = B (and 2 = C where applicable).

GameSpec Hipster() {
  return MakeStaticGame(
      "hipster", 2, [](int a, const Vec& mu) { return -mu[a]; }, 1.0);
}

GameSpec Suits() {
  return MakeStaticGame(
      "suits", 2, [](int a, const Vec& mu) { return mu[a]; }, 1.0);
}

GameSpec DominatedAction() {
  return MakeStaticGame(
      "dominated_action", 3,
      [](int a, const Vec& mu) {
        switch (a) {
          case 0: return mu[0] + mu[2];
          case 1: return mu[1];
          default: return mu[0] + mu[2] - 0.05;
        }
      },
      1.0);
}

GameSpec AlmostDominatedAction() {
  return MakeStaticGame(
      "almost_dominated_action", 3,
      [](int a, const Vec& mu) {
        switch (a) {
          case 0: return mu[0] + mu[2];
          case 1: return mu[1];
          default: return mu[0] + mu[2] - 0.05 * mu[1];
        }
      },
      1.0);
}

GameSpec BiasedRps() {
  return MakeStaticGame(
      "biased_rps", 3,
      [](int a, const Vec& mu) {
        switch (a) {
          case 0: return 0.5 * mu[1] - 0.3 * mu[2];
          case 1: return 0.3 * mu[2] - 0.7 * mu[0];
          default: return 0.7 * mu[0] - 0.5 * mu[1];
        }
      },
      1.0);
}

// Actions 0 = a, 1 = b. Players picking the less popular action are
// rewarded; at the exact split, b is rewarded.
GameSpec RewardForTheFew() {
  return MakeStaticGame(
      "reward_for_the_few", 2,
      [](int a, const Vec& mu) {
        if (a == 0) return mu[0] < 0.5 ? 1.0 : 0.0;
        return mu[0] < 0.5 ? 0.0 : 1.0;
      },
      1.0);
}

// Actions 0 = R, 1 = P, 2 = S. Non-Dirac populations pay (1, -1, -3);
// Dirac populations pay the usual cyclic values.
GameSpec MfRpsDiscontinuous() {
  return MakeStaticGame(
      "mf_rps_discontinuous", 3,
      [](int a, const Vec& mu) {
        int dirac = -1;
        for (int i = 0; i < 3; ++i) {
          if (mu[i] >= 1.0 - kDiracTol) dirac = i;
        }
        if (dirac < 0) {
          switch (a) {
            case 0: return 1.0;
            case 1: return -1.0;
            default: return -3.0;
          }
        }
        if (a == dirac) return 0.0;
        // (a - dirac) mod 3 == 1 means a beats the population's action.
        return (a - dirac + 3) % 3 == 1 ? 1.0 : -1.0;
      },
      3.0);
}

// Actions 0 = R, 1 = P, 2 = S, ordered by which action dominates the
// visible population.
GameSpec MfRpsOrdered() {
  return MakeStaticGame(
      "mf_rps_ordered", 3,
      [](int a, const Vec& mu) {
        if (mu[1] > 0.0) {  // some paper in play: scissors wins
          switch (a) {
            case 2: return 1.0;
            case 1: return 0.0;
            default: return -1.0;
          }
        }
        if (mu[2] > 0.0) {  // no paper, some scissors: rock wins
          switch (a) {
            case 0: return 1.0;
            case 2: return 0.0;
            default: return -1.0;
          }
        }
        // All rock: paper wins.
        switch (a) {
          case 1: return 1.0;
          case 0: return 0.0;
          default: return -1.0;
        }
      },
      1.0);
}

// Actions 0 = C(ooperate), 1 = D(efect). D strictly dominates.
GameSpec PrisonersDilemma() {
  return MakeStaticGame(
      "prisoners_dilemma", 2,
      [](int a, const Vec& mu) {
        if (a == 0) return 3.0 * mu[0] - mu[1];
        return 4.0 * mu[0];
      },
      4.0);
}

GameSpec HoleTrap(const GameId& id) {
  const double plus_reward = Param(id, "plus_reward", 1.0);
  const double hole_reward = Param(id, "hole_reward", -1.0);
  GameSpec game;
  game.name = "hole_trap";
  game.horizon = 3;
  game.num_states = 6;
  game.num_actions = 2;  // 0 = L, 1 = R
  game.mu0 = Vec(6, 0.0);
  game.mu0[kHoleTrapStart] = 1.0;
  game.coupling = Coupling::kStateFlow;
  game.mu_independent_dynamics = false;
  game.reward_bound = std::max(std::abs(plus_reward), std::abs(hole_reward));
  game.reward = [plus_reward, hole_reward](int /*t*/, int x, int /*a*/,
                                           const Vec& /*mu*/) {
    if (x == kHoleTrapLeftPlus || x == kHoleTrapRightPlus) return plus_reward;
    if (x == kHoleTrapHole) return hole_reward;
    return 0.0;
  };
  game.transition = [](int /*t*/, int x, int a, const Vec& mu) {
    Vec row(6, 0.0);
    switch (x) {
      case kHoleTrapStart:
        row[a == 0 ? kHoleTrapLeft : kHoleTrapRight] = 1.0;
        break;
      case kHoleTrapLeft:
        row[mu[kHoleTrapLeft] >= 1.0 - kDiracTol ? kHoleTrapLeftPlus
                                                 : kHoleTrapHole] = 1.0;
        break;
      case kHoleTrapRight:
        row[mu[kHoleTrapRight] >= 1.0 - kDiracTol ? kHoleTrapRightPlus
                                                  : kHoleTrapHole] = 1.0;
        break;
      default:
        row[x] = 1.0;  // terminal states absorb
        break;
    }
    return row;
  };
  return game;
}

}  // namespace

GameSpec MakeStaticGame(std::string name, int num_actions,
                        std::function<double(int a, const Vec& mu)> reward,
                        double reward_bound) {
  GameSpec game;
  game.name = std::move(name);
  game.horizon = 1;
  game.num_states = 1;
  game.num_actions = num_actions;
  game.mu0 = Vec{1.0};
  game.coupling = Coupling::kActionMarginal;
  game.mu_independent_dynamics = true;
  game.reward_bound = reward_bound;
  game.reward = [fn = std::move(reward)](int /*t*/, int /*x*/, int a,
                                         const Vec& mu) { return fn(a, mu); };
  return game;
}

std::vector<std::string> RegisteredGames() {
  return {"hipster",
          "suits",
          "dominated_action",
          "almost_dominated_action",
          "biased_rps",
          "reward_for_the_few",
          "mf_rps_discontinuous",
          "mf_rps_ordered",
          "prisoners_dilemma",
          "hole_trap"};
}

GameSpec BuildGame(const GameId& id) {
  if (id.name == "hipster") return Hipster();
  if (id.name == "suits") return Suits();
  if (id.name == "dominated_action") return DominatedAction();
  if (id.name == "almost_dominated_action") return AlmostDominatedAction();
  if (id.name == "biased_rps") return BiasedRps();
  if (id.name == "reward_for_the_few") return RewardForTheFew();
  if (id.name == "mf_rps_discontinuous") return MfRpsDiscontinuous();
  if (id.name == "mf_rps_ordered") return MfRpsOrdered();
  if (id.name == "prisoners_dilemma") return PrisonersDilemma();
  if (id.name == "hole_trap") return HoleTrap(id);
  throw UnknownGame("unknown game: " + id.name);
}

GameSpec BuildGame(const std::string& name) { return BuildGame(GameId{name, {}}); }

}  // namespace mfg
