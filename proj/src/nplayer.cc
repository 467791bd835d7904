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

#include "mfglab/nplayer.h"

#include <algorithm>
#include <cmath>

#include "mfglab/parallel.h"
#include "mfglab/rng.h"

namespace mfg {

namespace {

// All stochastic draws of one sample, shared by the recommended and the
// deviated run (common random numbers).
struct SampleDraws {
  std::vector<double> init;          // per player
  Mat steps;                         // [player][t]
};

SampleDraws DrawTrajectories(const GameSpec& game, int num_players,
                             uint64_t base) {
  SampleDraws draws;
  if (game.is_static()) return draws;
  draws.init.resize(num_players);
  draws.steps.assign(num_players, Vec(std::max(game.horizon - 1, 0)));
  for (int i = 0; i < num_players; ++i) {
    RandomStream stream(base, static_cast<uint64_t>(i));
    draws.init[i] = stream.NextDouble();
    for (int t = 0; t + 1 < game.horizon; ++t) {
      draws.steps[i][t] = stream.NextDouble();
    }
  }
  return draws;
}

struct SimOutcome {
  MeanFieldFlow empirical;
  Vec returns;
};

SimOutcome SimulateWithDraws(const GameSpec& game,
                             const std::vector<DeterministicPolicy>& policies,
                             const SampleDraws& draws) {
  const int n = static_cast<int>(policies.size());
  SimOutcome out;
  out.returns.assign(n, 0.0);

  if (game.is_static()) {
    Vec counts(game.num_actions, 0.0);
    for (int i = 0; i < n; ++i) counts[policies[i].action(0, 0)] += 1.0;
    Vec row(game.num_actions);
    for (int a = 0; a < game.num_actions; ++a) row[a] = counts[a] / n;
    for (int i = 0; i < n; ++i) {
      out.returns[i] = game.reward(0, 0, policies[i].action(0, 0), row);
    }
    out.empirical.rows.push_back(std::move(row));
    return out;
  }

  std::vector<int> states(n);
  for (int i = 0; i < n; ++i) {
    states[i] = SampleIndexFrom(game.mu0, draws.init[i]);
  }
  for (int t = 0; t < game.horizon; ++t) {
    Vec row(game.num_states, 0.0);
    for (int i = 0; i < n; ++i) row[states[i]] += 1.0 / n;
    for (int i = 0; i < n; ++i) {
      out.returns[i] += game.reward(t, states[i], policies[i].action(t, states[i]), row);
    }
    if (t + 1 < game.horizon) {
      std::vector<int> next(n);
      for (int i = 0; i < n; ++i) {
        const Vec p = game.transition(t, states[i],
                                      policies[i].action(t, states[i]), row);
        next[i] = SampleIndexFrom(p, draws.steps[i][t]);
      }
      states = std::move(next);
    }
    out.empirical.rows.push_back(std::move(row));
  }
  return out;
}

DeterministicPolicy Deviate(const Deviation& deviation,
                            const DeterministicPolicy& recommended) {
  if (const auto* fixed = std::get_if<DeterministicPolicy>(&deviation)) {
    return *fixed;
  }
  return std::get<PolicySwap>(deviation).Apply(recommended);
}

void RequireSmallStaticGame(const GameSpec& game, int num_players) {
  if (!game.is_static() || game.num_actions > 4 || num_players > 3) {
    throw TooLarge("oracle needs a static game with |Pi| <= 4 and N <= 3");
  }
}

// r(action, counts'/N) for a profile with player 0's action replaced.
double StaticDeviatedReward(const GameSpec& game, const Vec& counts, int n,
                            int own_action, int new_action) {
  Vec row(game.num_actions);
  for (int a = 0; a < game.num_actions; ++a) {
    double c = counts[a];
    if (a == own_action) c -= 1.0;
    if (a == new_action) c += 1.0;
    row[a] = c / n;
  }
  return game.reward(0, 0, new_action, row);
}

double StaticReward(const GameSpec& game, const Vec& counts, int n, int action) {
  Vec row(game.num_actions);
  for (int a = 0; a < game.num_actions; ++a) row[a] = counts[a] / n;
  return game.reward(0, 0, action, row);
}

// Enumerates i.i.d. profiles of nu over indices and calls visit with
// (player actions, probability).
void ForEachIidProfile(const PolicyDistribution& nu, int num_players,
                       const std::function<void(const std::vector<int>&, double)>& visit) {
  std::vector<int> choice(num_players, 0);
  std::function<void(int, double)> rec = [&](int i, double prob) {
    if (i == num_players) {
      visit(choice, prob);
      return;
    }
    for (int k = 0; k < nu.size(); ++k) {
      choice[i] = k;
      rec(i + 1, prob * nu.weights[k]);
    }
  };
  rec(0, 1.0);
}

}  // namespace

AssignmentResult SimulateAssignment(const GameSpec& game,
                                    const PolicyDistribution& nu,
                                    int num_players, uint64_t seed) {
  if (num_players < 1) throw Error("SimulateAssignment: num_players >= 1");
  RandomStream stream(seed);
  AssignmentResult result;
  result.policies.reserve(num_players);
  for (int i = 0; i < num_players; ++i) {
    result.policies.push_back(nu.policies[stream.SampleIndex(nu.weights)]);
  }
  const SampleDraws draws =
      DrawTrajectories(game, num_players, stream.NextUint64());
  SimOutcome out = SimulateWithDraws(game, result.policies, draws);
  result.empirical = std::move(out.empirical);
  result.returns = std::move(out.returns);
  return result;
}

GapEstimate DeviationGapMc(const GameSpec& game, const CorrelationDevice& rho,
                           const Deviation& deviation, int num_players,
                           int samples, uint64_t seed) {
  if (num_players < 2 || samples < 1) {
    throw Error("DeviationGapMc: need N >= 2 and samples >= 1");
  }
  Vec diffs(samples);
  ParallelFor(samples, [&](int s) {
    RandomStream stream(seed, static_cast<uint64_t>(s));
    const int atom = stream.SampleIndex(rho.weights);
    const PolicyDistribution& nu = rho.atoms[atom];
    std::vector<DeterministicPolicy> policies;
    policies.reserve(num_players);
    for (int i = 0; i < num_players; ++i) {
      policies.push_back(nu.policies[stream.SampleIndex(nu.weights)]);
    }
    const SampleDraws draws =
        DrawTrajectories(game, num_players, stream.NextUint64());

    const SimOutcome recommended = SimulateWithDraws(game, policies, draws);
    std::vector<DeterministicPolicy> deviated = policies;
    deviated[0] = Deviate(deviation, policies[0]);
    const SimOutcome alternative = SimulateWithDraws(game, deviated, draws);
    diffs[s] = alternative.returns[0] - recommended.returns[0];
  });

  GapEstimate estimate;
  estimate.samples = samples;
  double sum = 0.0;
  for (double d : diffs) sum += d;
  estimate.mean = sum / samples;
  double ss = 0.0;
  for (double d : diffs) ss += (d - estimate.mean) * (d - estimate.mean);
  estimate.stderr_ =
      samples > 1 ? std::sqrt(ss / (samples - 1) / samples) : 0.0;
  return estimate;
}

double TheoreticalGapBound(double gamma_r, int horizon, int num_players) {
  return 2.0 * gamma_r * horizon *
         (1.0 + std::sqrt(1.0 / (2.0 * num_players))) /
         std::sqrt(static_cast<double>(num_players));
}

ScalingStudyResult RunScalingStudy(const GameSpec& game,
                                   const CorrelationDevice& rho,
                                   const std::vector<int>& player_counts,
                                   int samples, uint64_t seed) {
  ScalingStudyResult result;
  const GapReport cce = CceGap(game, rho);
  result.deviation = *cce.deviation;

  for (size_t k = 0; k < player_counts.size(); ++k) {
    ScalingPoint point;
    point.num_players = player_counts[k];
    point.gap = DeviationGapMc(game, rho, result.deviation, player_counts[k],
                               samples, HashCombine(seed, k));
    result.points.push_back(point);
  }

  // Least-squares slope of log(max(gap, 3*stderr)) against log N.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& point : result.points) {
    const double floored = std::max(point.gap.mean, 3.0 * point.gap.stderr_);
    if (floored <= 0.0) {
      result.degenerate = true;
      continue;
    }
    const double x = std::log(static_cast<double>(point.num_players));
    const double y = std::log(floored);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2) {
    result.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    result.degenerate = true;
  }
  return result;
}

// -- Oracles ---------------------------------------------------------------

ExactGaps BruteForceIidGaps(const GameSpec& game, const CorrelationDevice& rho,
                            int num_players) {
  RequireSmallStaticGame(game, num_players);
  const std::vector<DeterministicPolicy> all =
      EnumerateDeterministicPolicies(game, 64);
  const int num_policies = static_cast<int>(all.size());

  // deviation_value[pi][pi']: E[1{player 0 recommended pi} *
  //                             (r(pi' vs deviated profile) - r(pi vs profile))]
  Mat deviation_value(num_policies, Vec(num_policies, 0.0));
  for (int k = 0; k < rho.size(); ++k) {
    const PolicyDistribution& nu = rho.atoms[k];
    ForEachIidProfile(nu, num_players, [&](const std::vector<int>& choice,
                                           double prob) {
      if (prob == 0.0) return;
      Vec counts(game.num_actions, 0.0);
      for (int i = 0; i < num_players; ++i) {
        counts[nu.policies[choice[i]].action(0, 0)] += 1.0;
      }
      const int own = nu.policies[choice[0]].action(0, 0);
      int own_index = 0;
      for (int p = 0; p < num_policies; ++p) {
        if (all[p].action(0, 0) == own) own_index = p;
      }
      const double base = StaticReward(game, counts, num_players, own);
      for (int p = 0; p < num_policies; ++p) {
        const double dev = StaticDeviatedReward(game, counts, num_players, own,
                                                all[p].action(0, 0));
        deviation_value[own_index][p] += rho.weights[k] * prob * (dev - base);
      }
    });
  }

  ExactGaps gaps;
  // CCE: best constant map.
  gaps.cce_gap = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < num_policies; ++p) {
    double total = 0.0;
    for (int pi = 0; pi < num_policies; ++pi) total += deviation_value[pi][p];
    gaps.cce_gap = std::max(gaps.cce_gap, total);
  }
  // CE: best swap map, by explicit enumeration over |Pi|^|Pi| maps.
  std::vector<int> map(num_policies, 0);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(int, double)> rec = [&](int pi, double acc) {
    if (pi == num_policies) {
      best = std::max(best, acc);
      return;
    }
    for (int target = 0; target < num_policies; ++target) {
      rec(pi + 1, acc + deviation_value[pi][target]);
    }
  };
  rec(0, 0.0);
  gaps.ce_gap = best;
  return gaps;
}

ExactAssignmentGaps BruteForceAssignmentGaps(const GameSpec& game,
                                             const EmpiricalDevice& device,
                                             int num_players) {
  RequireSmallStaticGame(game, num_players);
  const std::vector<DeterministicPolicy> all =
      EnumerateDeterministicPolicies(game, 64);
  const int num_policies = static_cast<int>(all.size());
  auto policy_index = [&](const DeterministicPolicy& policy) {
    for (int p = 0; p < num_policies; ++p) {
      if (all[p] == policy) return p;
    }
    throw Error("policy outside the enumerated set");
  };

  // Route 1: exact assignment. The empirical distribution is fixed by the
  // atom's counts; player 0 holds policy pi with probability n_pi / N.
  Mat assignment_value(num_policies, Vec(num_policies, 0.0));
  for (size_t k = 0; k < device.atoms.size(); ++k) {
    const EmpiricalAtom& atom = device.atoms[k];
    Vec counts(game.num_actions, 0.0);
    int total = 0;
    for (size_t j = 0; j < atom.policies.size(); ++j) {
      counts[atom.policies[j].action(0, 0)] += atom.counts[j];
      total += atom.counts[j];
    }
    if (total != num_players) throw Error("empirical atom counts must sum to N");
    for (size_t j = 0; j < atom.policies.size(); ++j) {
      if (atom.counts[j] == 0) continue;
      const double prob = static_cast<double>(atom.counts[j]) / num_players;
      const int own = atom.policies[j].action(0, 0);
      const int own_index = policy_index(atom.policies[j]);
      const double base = StaticReward(game, counts, num_players, own);
      for (int p = 0; p < num_policies; ++p) {
        const double dev = StaticDeviatedReward(game, counts, num_players, own,
                                                all[p].action(0, 0));
        assignment_value[own_index][p] +=
            device.weights[k] * prob * (dev - base);
      }
    }
  }

  // Route 2: the equivalent symmetric profile distribution (uniform over
  // distinct orderings of the multiset). Symmetry makes every ordering
  // weigh player 0's recommendation identically, so the deviation values
  // must match route 1; both are computed independently.
  Mat profile_value(num_policies, Vec(num_policies, 0.0));
  for (size_t k = 0; k < device.atoms.size(); ++k) {
    const EmpiricalAtom& atom = device.atoms[k];
    std::vector<int> bag;  // policy index per player slot, as a multiset
    for (size_t j = 0; j < atom.policies.size(); ++j) {
      for (int c = 0; c < atom.counts[j]; ++c) {
        bag.push_back(policy_index(atom.policies[j]));
      }
    }
    std::sort(bag.begin(), bag.end());
    Vec counts(game.num_actions, 0.0);
    for (int index : bag) counts[all[index].action(0, 0)] += 1.0;

    std::vector<std::vector<int>> orderings;
    do {
      orderings.push_back(bag);
    } while (std::next_permutation(bag.begin(), bag.end()));
    const double ordering_prob = 1.0 / orderings.size();

    for (const auto& ordering : orderings) {
      const int own_index = ordering[0];
      const int own = all[own_index].action(0, 0);
      const double base = StaticReward(game, counts, num_players, own);
      for (int p = 0; p < num_policies; ++p) {
        const double dev = StaticDeviatedReward(game, counts, num_players, own,
                                                all[p].action(0, 0));
        profile_value[own_index][p] +=
            device.weights[k] * ordering_prob * (dev - base);
      }
    }
  }

  auto gaps_from = [&](const Mat& value) {
    ExactGaps gaps;
    gaps.cce_gap = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < num_policies; ++p) {
      double total = 0.0;
      for (int pi = 0; pi < num_policies; ++pi) total += value[pi][p];
      gaps.cce_gap = std::max(gaps.cce_gap, total);
    }
    double best = -std::numeric_limits<double>::infinity();
    std::function<void(int, double)> rec = [&](int pi, double acc) {
      if (pi == num_policies) {
        best = std::max(best, acc);
        return;
      }
      for (int target = 0; target < num_policies; ++target) {
        rec(pi + 1, acc + value[pi][target]);
      }
    };
    rec(0, 0.0);
    gaps.ce_gap = best;
    return gaps;
  };

  ExactAssignmentGaps result;
  result.assignment = gaps_from(assignment_value);
  result.profile = gaps_from(profile_value);
  return result;
}

double ExactDeviationGap(const GameSpec& game, const CorrelationDevice& rho,
                         const Deviation& deviation, int num_players) {
  RequireSmallStaticGame(game, num_players);
  double gap = 0.0;
  for (int k = 0; k < rho.size(); ++k) {
    const PolicyDistribution& nu = rho.atoms[k];
    ForEachIidProfile(nu, num_players, [&](const std::vector<int>& choice,
                                           double prob) {
      if (prob == 0.0) return;
      Vec counts(game.num_actions, 0.0);
      for (int i = 0; i < num_players; ++i) {
        counts[nu.policies[choice[i]].action(0, 0)] += 1.0;
      }
      const DeterministicPolicy& recommended = nu.policies[choice[0]];
      const int own = recommended.action(0, 0);
      const int target = Deviate(deviation, recommended).action(0, 0);
      const double base = StaticReward(game, counts, num_players, own);
      const double dev =
          StaticDeviatedReward(game, counts, num_players, own, target);
      gap += rho.weights[k] * prob * (dev - base);
    });
  }
  return gap;
}

}  // namespace mfg
