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

#ifndef MFGLAB_GAMES_H_
#define MFGLAB_GAMES_H_

#include <map>
#include <string>
#include <vector>

#include "mfglab/core.h"

// Built-in game fixtures. All are static (normal-form) games coupled
// through the action marginal, except hole_trap which is a three-step
// dynamic game with mu-dependent transitions.

namespace mfg {

struct GameId {
  std::string name;
  std::map<std::string, double> params;
};

// Registered names: hipster, suits, dominated_action,
// almost_dominated_action, biased_rps, reward_for_the_few,
// mf_rps_discontinuous, mf_rps_ordered, prisoners_dilemma, hole_trap.
std::vector<std::string> RegisteredGames();

// Throws UnknownGame for unregistered names.
GameSpec BuildGame(const GameId& id);
GameSpec BuildGame(const std::string& name);

// A static game from an explicit reward function over action marginals.
GameSpec MakeStaticGame(std::string name, int num_actions,
                        std::function<double(int a, const Vec& mu)> reward,
                        double reward_bound);

// Hole-trap state indices.
inline constexpr int kHoleTrapStart = 0;
inline constexpr int kHoleTrapLeft = 1;
inline constexpr int kHoleTrapRight = 2;
inline constexpr int kHoleTrapLeftPlus = 3;
inline constexpr int kHoleTrapHole = 4;
inline constexpr int kHoleTrapRightPlus = 5;

}  // namespace mfg

#endif  // MFGLAB_GAMES_H_
