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

#ifndef MFGLAB_SERIALIZE_H_
#define MFGLAB_SERIALIZE_H_

#include <string>

#include <json.hpp>

#include "mfglab/core.h"
#include "mfglab/equilibrium.h"
#include "mfglab/learners.h"
#include "mfglab/nplayer.h"
#include "mfglab/psro.h"

// JSON and CSV encodings of the library's artifacts. Deterministic
// policies serialize as T x |X| integer tables; stochastic policies and
// flows as {"T", "num_states", "num_actions", "rows"} objects (flow rows
// span the game's mean-field support: actions for static games).

namespace mfg {

using nlohmann::json;

json ToJson(const DeterministicPolicy& policy);
DeterministicPolicy DeterministicPolicyFromJson(const json& j);

json ToJson(const StochasticPolicy& policy);
StochasticPolicy StochasticPolicyFromJson(const json& j);

json ToJson(const GameSpec& game, const MeanFieldFlow& flow);
MeanFieldFlow FlowFromJson(const json& j);

json ToJson(const PolicyDistribution& nu);
PolicyDistribution PolicyDistributionFromJson(const json& j);

json ToJson(const CorrelationDevice& rho);
CorrelationDevice DeviceFromJson(const json& j);

json ToJson(const GapReport& report);

json ToJson(const LearningTrace& trace, const GameSpec& game);

// iteration, step_payoff, external_regret_so_far, swap_regret_so_far,
// then per-action recommendation probabilities for static games.
std::string TraceCsv(const GameSpec& game, const LearningTrace& trace);

json ToJson(const PsroResult& result);
std::string PsroOuterCsv(const PsroResult& result);

json ToJson(const ScalingStudyResult& study);
std::string ScalingCsv(const ScalingStudyResult& study);

void WriteTextFile(const std::string& path, const std::string& contents);
std::string ReadTextFile(const std::string& path);

}  // namespace mfg

#endif  // MFGLAB_SERIALIZE_H_
