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

#include "mfglab/learners.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "mfglab/equilibrium.h"

namespace mfg {

namespace {

void AddRewardTable(const GameSpec& game, const MeanFieldFlow& flow,
                    Vec& table) {
  for (int t = 0; t < game.horizon; ++t) {
    const Vec& mu = flow.row(t);
    for (int x = 0; x < game.num_states; ++x) {
      for (int a = 0; a < game.num_actions; ++a) {
        table[(static_cast<size_t>(t) * game.num_states + x) *
                  game.num_actions +
              a] += game.reward(t, x, a, mu);
      }
    }
  }
}

struct TraceView {
  std::vector<MeanFieldFlow> flows;
  Vec weights;  // one per step
  std::vector<DeterministicPolicy> support;
};

TraceView ViewOf(const LearningTrace& trace) {
  TraceView view;
  std::map<DeterministicPolicy, bool> seen;
  for (const auto& step : trace.steps) {
    view.flows.push_back(step.flow);
    view.weights.push_back(1.0);
    for (const auto& policy : step.nu.policies) seen[policy] = true;
  }
  for (const auto& [policy, unused] : seen) view.support.push_back(policy);
  return view;
}

}  // namespace

LearningTrace JfpRun(const GameSpec& game, int iterations,
                     const StochasticPolicy& init) {
  if (iterations < 1) throw Error("JfpRun: iterations must be >= 1");
  LearningTrace trace;
  trace.algorithm = "jfp";

  // Each iteration the population jointly replays a uniformly sampled
  // past best response, so the environment it averages over is the init
  // flow plus the flows of the best responses themselves. The init never
  // enters the recommendations.
  Vec reward_sum(static_cast<size_t>(game.horizon) * game.num_states *
                     game.num_actions,
                 0.0);
  const MeanFieldFlow init_flow = SelfConsistentFlow(game, init);
  AddRewardTable(game, init_flow, reward_sum);
  // Transitions are evaluated at the running averaged flow (only felt by
  // mu-dependent dynamics, where this extension is experimental).
  MeanFieldFlow running_average = init_flow;

  std::map<DeterministicPolicy, int> br_counts;
  for (int j = 1; j <= iterations; ++j) {
    const DeterministicPolicy br =
        BestResponseToTables(game, reward_sum, running_average).policy;
    ++br_counts[br];
    const MeanFieldFlow br_flow =
        SelfConsistentFlow(game, ToStochastic(game, br));

    TraceStep step;
    step.iteration = j;
    for (const auto& [policy, count] : br_counts) {
      step.nu.policies.push_back(policy);
      step.nu.weights.push_back(static_cast<double>(count) / j);
    }
    step.flow = AggregateFlow(game, step.nu);
    step.payoff = MixturePayoff(game, step.nu, step.flow);

    AddRewardTable(game, br_flow, reward_sum);
    running_average = step.flow;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

StochasticPolicy Softmax(const GameSpec& game, const QTable& y) {
  StochasticPolicy policy = StochasticPolicy::Uniform(game);
  for (int t = 0; t < game.horizon; ++t) {
    for (int x = 0; x < game.num_states; ++x) {
      double top = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < game.num_actions; ++a) {
        top = std::max(top, y.at(t, x, a));
      }
      double total = 0.0;
      for (int a = 0; a < game.num_actions; ++a) {
        const double e = std::exp(y.at(t, x, a) - top);
        policy.prob(t, x, a) = e;
        total += e;
      }
      for (int a = 0; a < game.num_actions; ++a) policy.prob(t, x, a) /= total;
    }
  }
  return policy;
}

LearningTrace OmdRun(const GameSpec& game, int iterations, double eta,
                     const std::optional<QTable>& init_y,
                     long long max_support) {
  if (eta <= 0.0) throw Error("OmdRun: eta must be positive");
  LearningTrace trace;
  trace.algorithm = "omd";
  trace.eta = eta;

  QTable y = init_y.value_or(QTable::Zeros(game));
  if (y.horizon != game.horizon || y.num_states != game.num_states ||
      y.num_actions != game.num_actions) {
    throw DimensionMismatch("OmdRun: init_y does not match the game");
  }
  for (int tau = 0; tau < iterations; ++tau) {
    const StochasticPolicy policy = Softmax(game, y);

    TraceStep step;
    step.iteration = tau;
    try {
      step.nu = DecomposeStochastic(game, policy, max_support);
      step.flow = AggregateFlow(game, step.nu);
      step.payoff = MixturePayoff(game, step.nu, step.flow);
    } catch (const SupportTooLarge&) {
      step.flow = SelfConsistentFlow(game, policy);
      step.payoff = Payoff(game, policy, step.flow);
    }

    const QTable q = OnPolicyQ(game, policy, step.flow);
    for (size_t i = 0; i < y.values.size(); ++i) y.values[i] += eta * q.values[i];
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

CorrelationDevice EmpiricalPlay(const LearningTrace& trace) {
  if (trace.steps.empty()) throw EmptyTrace("trace has no steps");
  CorrelationDevice device;
  const double weight = 1.0 / trace.steps.size();
  for (const auto& step : trace.steps) {
    if (step.nu.size() == 0) {
      throw SupportTooLarge("trace step has no recommendation");
    }
    bool merged = false;
    for (int k = 0; k < device.size() && !merged; ++k) {
      if (device.atoms[k] == step.nu) {
        device.weights[k] += weight;
        merged = true;
      }
    }
    if (!merged) {
      device.atoms.push_back(step.nu);
      device.weights.push_back(weight);
    }
  }
  return device;
}

Vec ExternalRegretPrefixes(const GameSpec& game, const LearningTrace& trace) {
  const TraceView view = ViewOf(trace);
  const std::vector<DeterministicPolicy> candidates =
      CandidateDeviations(game, view.flows, view.weights, view.support);
  const size_t n = trace.steps.size();
  Vec prefixes(n, 0.0);
  Vec cumulative(candidates.size(), 0.0);
  double played = 0.0;
  for (size_t j = 0; j < n; ++j) {
    played += trace.steps[j].payoff;
    double best = -std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < candidates.size(); ++c) {
      cumulative[c] += Payoff(game, candidates[c], trace.steps[j].flow);
      best = std::max(best, cumulative[c]);
    }
    prefixes[j] = best - played;
  }
  return prefixes;
}

double ExternalRegret(const GameSpec& game, const LearningTrace& trace) {
  if (trace.steps.empty()) throw EmptyTrace("trace has no steps");
  return ExternalRegretPrefixes(game, trace).back();
}

Vec SwapRegretPrefixes(const GameSpec& game, const LearningTrace& trace) {
  const TraceView view = ViewOf(trace);
  const size_t n = trace.steps.size();
  Vec prefixes(n, 0.0);

  for (const auto& recommended : view.support) {
    Vec mass(n, 0.0);
    for (size_t j = 0; j < n; ++j) {
      mass[j] = trace.steps[j].nu.WeightOf(recommended);
    }
    const std::vector<DeterministicPolicy> candidates =
        CandidateDeviations(game, view.flows, mass, {recommended});
    Vec cumulative(candidates.size(), 0.0);
    double base = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (mass[j] > 0.0) {
        const double own = Payoff(game, recommended, trace.steps[j].flow);
        base += mass[j] * own;
        for (size_t c = 0; c < candidates.size(); ++c) {
          cumulative[c] +=
              mass[j] * Payoff(game, candidates[c], trace.steps[j].flow);
        }
      }
      double best = 0.0;  // the identity swap attains 0
      for (double value : cumulative) best = std::max(best, value - base);
      prefixes[j] += best;
    }
  }
  return prefixes;
}

double SwapRegret(const GameSpec& game, const LearningTrace& trace) {
  if (trace.steps.empty()) throw EmptyTrace("trace has no steps");
  return SwapRegretPrefixes(game, trace).back();
}

}  // namespace mfg
