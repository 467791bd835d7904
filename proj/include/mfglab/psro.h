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

#ifndef MFGLAB_PSRO_H_
#define MFGLAB_PSRO_H_

#include <vector>

#include "mfglab/core.h"
#include "mfglab/meta_solvers.h"

// Mean-Field PSRO: an outer loop growing a policy pool via best
// responses to a device produced by an inner no-regret bandit over the
// pool.

namespace mfg {

enum class PsroMode { kCce, kCe };

struct InnerBanditResult {
  CorrelationDevice device;  // empirical play over the bandit rounds
  double average_regret = 0.0;
  int rounds = 0;
  bool reached_epsilon = false;
};

// Rounds of: solver probabilities over the pool -> exact payoff vector
// against the induced flow -> feedback, until the tracked average
// regret (external, or swap for swap-wrapper solvers) is <= epsilon.
// A run that exhausts max_rounds still returns its device and achieved
// regret with reached_epsilon = false.
InnerBanditResult InnerBandit(const GameSpec& game,
                              const std::vector<DeterministicPolicy>& pool,
                              MetaSolver& solver, bool track_swap_regret,
                              double epsilon, int max_rounds);

struct PsroOuterRecord {
  int pool_size = 0;
  int inner_rounds = 0;
  double inner_regret = 0.0;
  double gap = 0.0;  // best-response advantage over the device
};

struct PsroResult {
  std::vector<DeterministicPolicy> pool;
  CorrelationDevice device;
  int iterations_used = 0;
  double final_gap = 0.0;        // mode's own gap of the final device
  double final_cce_gap = 0.0;    // verified by the equilibrium module
  double final_ce_gap = 0.0;
  bool converged = false;        // false means MaxOuterReached
  double achieved_inner_regret = 0.0;
  std::vector<PsroOuterRecord> outer_records;
};

struct PsroConfig {
  PsroMode mode = PsroMode::kCce;
  MetaSolverKind solver = MetaSolverKind::kRegretMatching;
  double eta = 0.1;            // PW-family learning rate
  double epsilon = 0.01;       // inner average-regret target
  double improvement_tol = 1e-8;
  int max_outer = 32;
  int max_inner_rounds = 200000;
  bool drop_init = false;      // keep only best responses after round one
};

// CCE mode adds the single best response to the device-averaged
// environment; CE mode adds one best response per recommended policy,
// against its conditional device. Stops when no added response improves
// by more than epsilon + improvement_tol.
PsroResult PsroRun(const GameSpec& game, const PsroConfig& config,
                   std::vector<DeterministicPolicy> init_pool);

}  // namespace mfg

#endif  // MFGLAB_PSRO_H_
