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

#ifndef MFGLAB_LEARNERS_H_
#define MFGLAB_LEARNERS_H_

#include <optional>
#include <string>
#include <vector>

#include "mfglab/core.h"

// Joint Fictitious Play and Online Mirror Descent with trace recording,
// empirical-play extraction, and external/swap regret accounting.

namespace mfg {

struct TraceStep {
  int iteration = 0;
  PolicyDistribution nu;   // the step's population recommendation
  MeanFieldFlow flow;      // aggregate flow of nu
  double payoff = 0.0;     // mixture payoff of nu against its own flow
};

struct LearningTrace {
  std::string algorithm;
  double eta = 0.0;
  std::vector<TraceStep> steps;
};

// Iterated best responses to the time-averaged environment. The initial
// policy shapes the first best response through the averaged rewards but
// never enters the recommendations, so dominated policies carry exactly
// zero empirical mass.
LearningTrace JfpRun(const GameSpec& game, int iterations,
                     const StochasticPolicy& init);

// Accumulate on-policy Q values into a dual table and play its softmax.
// Recommendations use the product-form decomposition; steps whose
// support exceeds max_support record flows and payoffs only.
LearningTrace OmdRun(const GameSpec& game, int iterations, double eta,
                     const std::optional<QTable>& init_y = std::nullopt,
                     long long max_support = 4096);

StochasticPolicy Softmax(const GameSpec& game, const QTable& y);

// Uniform device over the trace's recommendations, duplicates merged.
// Throws EmptyTrace (also when any step lacks a recommendation).
CorrelationDevice EmpiricalPlay(const LearningTrace& trace);

// max over fixed policies of the cumulative advantage over the trace.
double ExternalRegret(const GameSpec& game, const LearningTrace& trace);
// max over recommendation swaps (separable per recommended policy).
double SwapRegret(const GameSpec& game, const LearningTrace& trace);

// Cumulative regrets of every prefix, for trace CSVs and decay checks.
Vec ExternalRegretPrefixes(const GameSpec& game, const LearningTrace& trace);
Vec SwapRegretPrefixes(const GameSpec& game, const LearningTrace& trace);

}  // namespace mfg

#endif  // MFGLAB_LEARNERS_H_
