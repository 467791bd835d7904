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

#ifndef MFGLAB_EQUILIBRIUM_H_
#define MFGLAB_EQUILIBRIUM_H_

#include <optional>
#include <utility>
#include <vector>

#include "mfglab/core.h"

// Equilibrium-gap computations: Nash exploitability, CE/CCE gaps,
// homogeneous variants, conditional devices, consistency, monotonicity
// probes, and dominance checks.

namespace mfg {

// Optimal deviation keyed on the received recommendation. Off-support
// recommendations map to themselves.
struct PolicySwap {
  std::vector<std::pair<DeterministicPolicy, DeterministicPolicy>> mapping;

  DeterministicPolicy Apply(const DeterministicPolicy& policy) const;
};

struct GapReport {
  double gap = 0.0;
  // CCE-style reports carry the best fixed deviation; CE-style reports
  // carry the best swap.
  std::optional<DeterministicPolicy> deviation;
  std::optional<PolicySwap> swap;
  Vec per_atom;  // optional per-atom breakdown (empty when unused)
};

// Candidate deviations for gap/regret maxima: the full policy set when
// enumerable, otherwise per-flow best responses, the given support, and
// the best response to the weight-averaged environment. Gap and regret
// computations share this constructor so their identities are exact.
std::vector<DeterministicPolicy> CandidateDeviations(
    const GameSpec& game, const std::vector<MeanFieldFlow>& flows,
    const Vec& weights, const std::vector<DeterministicPolicy>& support,
    long long enumeration_cap = 1000);

// Nash gap of a population recommendation:
// best_response(mu(nu)).value - mixture_payoff(nu, mu(nu)).
GapReport Exploitability(const GameSpec& game, const PolicyDistribution& nu);

// sup over fixed deviations of the advantage over following rho.
// Negative when every fixed deviation is strictly harmful (the constant
// maps exclude the identity, and correlation can beat any fixed policy).
GapReport CceGap(const GameSpec& game, const CorrelationDevice& rho);

// sup over recommendation swaps, decomposed per recommended policy.
// per_atom holds each recommendation's contribution, indexed like the
// support returned by DeviceSupport().
GapReport CeGap(const GameSpec& game, const CorrelationDevice& rho);

// Per-atom exploitability of a homogeneous device; gap is the
// rho-weighted sum of positive parts.
GapReport HomogeneousCeGap(const GameSpec& game, const HomogeneousDevice& rho);

// Distinct recommended policies with positive device mass, sorted.
std::vector<DeterministicPolicy> DeviceSupport(const CorrelationDevice& rho);
// rho_Pi(pi) = sum_nu rho(nu) nu(pi).
double RecommendationMass(const CorrelationDevice& rho,
                          const DeterministicPolicy& policy);

// Belief over population recommendations after receiving `policy`.
// Throws ZeroMassRecommendation when rho_Pi(policy) == 0.
CorrelationDevice ConditionalDevice(const CorrelationDevice& rho,
                                    const DeterministicPolicy& policy);

struct ConsistencyGroup {
  MeanFieldFlow flow;
  std::vector<int> atom_indices;
  double residual = 0.0;  // Linf distance between group flow and the
                          // flow of the grouped mixture
};

// Groups atoms by induced aggregate flow (1e-9 Linf) and verifies that
// each group's mixed recommendation regenerates the group flow.
std::vector<ConsistencyGroup> ConsistencyCheck(const GameSpec& game,
                                               const CorrelationDevice& rho);

// Max over sampled flow pairs of sum_t <mu_t - mu'_t, r(., mu_t) - r(., mu'_t)>.
// Positive certifies non-monotonicity; non-positive is grid evidence only.
double MonotonicityViolation(const GameSpec& game, int grid_resolution,
                             uint64_t seed);

// Searches enumerated deterministic policies for one beating every rival
// on every probed flow. Positive results are grid evidence. A game with
// a single policy reports that policy with margin 0.
std::optional<std::pair<DeterministicPolicy, double>> FindStrictlyDominant(
    const GameSpec& game, int grid_resolution);

// Nash <-> device conversions.
CorrelationDevice NashToDevice(const PolicyDistribution& nu);
// Throws NotADirac unless rho has a single atom.
PolicyDistribution DeviceToNash(const CorrelationDevice& rho);

// Expected advantage of an explicit swap map under rho; the brute-force
// route used to pin CeGap's decomposition.
double SwapAdvantage(const GameSpec& game, const CorrelationDevice& rho,
                     const PolicySwap& swap);

}  // namespace mfg

#endif  // MFGLAB_EQUILIBRIUM_H_
