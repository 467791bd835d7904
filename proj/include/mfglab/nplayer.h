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

#ifndef MFGLAB_NPLAYER_H_
#define MFGLAB_NPLAYER_H_

#include <optional>
#include <variant>
#include <vector>

#include "mfglab/core.h"
#include "mfglab/equilibrium.h"

// Monte-Carlo simulator for the corresponding N-player games: deviation
// gap estimation with common random numbers, scaling studies against the
// O(1/sqrt(N)) bounds, and an exhaustive small-N oracle.

namespace mfg {

// Player 0's replacement: a fixed policy (CCE-style) or a swap keyed on
// the received recommendation (CE-style).
using Deviation = std::variant<DeterministicPolicy, PolicySwap>;

struct AssignmentResult {
  std::vector<DeterministicPolicy> policies;  // per player
  MeanFieldFlow empirical;                    // realized empirical flow
  Vec returns;                                // per player
};

// i.i.d. policy draws from nu; trajectories advance on the realized
// empirical distribution.
AssignmentResult SimulateAssignment(const GameSpec& game,
                                    const PolicyDistribution& nu, int num_players,
                                    uint64_t seed);

struct GapEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
};

// Paired estimator: each sample simulates the recommended and deviated
// runs from common random numbers and averages the return difference of
// player 0. Positive mean = profitable deviation.
GapEstimate DeviationGapMc(const GameSpec& game, const CorrelationDevice& rho,
                           const Deviation& deviation, int num_players,
                           int samples, uint64_t seed);

struct ScalingPoint {
  int num_players = 0;
  GapEstimate gap;
};

struct ScalingStudyResult {
  std::vector<ScalingPoint> points;
  DeterministicPolicy deviation;  // worst fixed deviation (CCE witness)
  double slope = 0.0;             // log-log fit of max(gap, 3*stderr) vs N
  bool degenerate = false;        // a point had no signal above the floor
};

ScalingStudyResult RunScalingStudy(const GameSpec& game,
                                   const CorrelationDevice& rho,
                                   const std::vector<int>& player_counts,
                                   int samples, uint64_t seed);

// Thm-style instantiated bound for mu-independent dynamics:
// 2 * gamma_r * T * (1 + sqrt(1/(2N))) / sqrt(N).
double TheoreticalGapBound(double gamma_r, int horizon, int num_players);

// -- Exhaustive small-N oracle -------------------------------------------

struct ExactGaps {
  double cce_gap = 0.0;
  double ce_gap = 0.0;
};

// Exact N-player CCE/CE gaps of a mean-field device under i.i.d. policy
// sampling, by enumeration over |support|^N profiles. Pins the MC
// estimator. Static games only, |Pi| <= 4, N <= 3.
ExactGaps BruteForceIidGaps(const GameSpec& game, const CorrelationDevice& rho,
                            int num_players);

// An N-player population distribution: an exact assignment (counts sum
// to N over the support policies).
struct EmpiricalAtom {
  std::vector<DeterministicPolicy> policies;
  std::vector<int> counts;
};

struct EmpiricalDevice {
  std::vector<EmpiricalAtom> atoms;
  Vec weights;
};

// Exact gaps under symmetric (exact-assignment) sampling from empirical
// atoms, and the same gaps computed through the equivalent symmetric
// profile distribution; the pair realizes the device<->profile
// correspondence.
struct ExactAssignmentGaps {
  ExactGaps assignment;   // enumerate assignments of the multiset
  ExactGaps profile;      // enumerate symmetric profiles
};

ExactAssignmentGaps BruteForceAssignmentGaps(const GameSpec& game,
                                             const EmpiricalDevice& device,
                                             int num_players);

// Exact N-player expected deviation advantage for one deviation (same
// semantics as DeviationGapMc), by enumeration. Static games only.
double ExactDeviationGap(const GameSpec& game, const CorrelationDevice& rho,
                         const Deviation& deviation, int num_players);

}  // namespace mfg

#endif  // MFGLAB_NPLAYER_H_
