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

#include "mfglab/core.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mfglab/rng.h"

namespace mfg {

// -- Numeric helpers ----------------------------------------------------

double Dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double LinfDistance(const Vec& a, const Vec& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double LinfDistance(const Mat& a, const Mat& b) {
  double d = 0.0;
  for (size_t t = 0; t < a.size(); ++t) d = std::max(d, LinfDistance(a[t], b[t]));
  return d;
}

bool IsSimplex(const Vec& v, double tol) {
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol;
}

Vec NormalizedSimplex(Vec v, const std::string& what) {
  double sum = 0.0;
  for (double x : v) {
    if (x < -kSimplexRepairTol) {
      throw InvalidSimplex(what + ": negative entry");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexRepairTol) {
    throw InvalidSimplex(what + ": entries sum to " + std::to_string(sum));
  }
  for (double& x : v) x = std::max(x, 0.0) / sum;
  return v;
}

// -- Game validation ----------------------------------------------------

void ValidateGame(const GameSpec& game, int spot_checks, uint64_t seed) {
  if (game.horizon < 1 || game.num_states < 1 || game.num_actions < 1) {
    throw Error("GameSpec: non-positive dimensions");
  }
  if (!IsSimplex(game.mu0, kSimplexRepairTol)) {
    throw InvalidSimplex("GameSpec.mu0");
  }
  if (game.is_static() && (game.horizon != 1 || game.num_states != 1)) {
    throw Error("static games must have one state and one decision time");
  }
  RandomStream rng(seed);
  for (int i = 0; i < spot_checks; ++i) {
    const int t = rng.NextInt(game.horizon);
    const int x = rng.NextInt(game.num_states);
    const int a = rng.NextInt(game.num_actions);
    const Vec mu = rng.NextSimplex(game.mf_dim());
    const double r = game.reward(t, x, a, mu);
    if (std::abs(r) > game.reward_bound + 1e-12) {
      throw Error("GameSpec: |reward| exceeds the declared bound");
    }
    if (game.horizon > 1) {
      const Vec row = game.transition(t, x, a, mu);
      if (static_cast<int>(row.size()) != game.num_states ||
          !IsSimplex(row, kSimplexRepairTol)) {
        throw InvalidSimplex("GameSpec.transition row");
      }
      if (game.mu_independent_dynamics) {
        const Vec other = game.transition(t, x, a, rng.NextSimplex(game.mf_dim()));
        if (LinfDistance(row, other) > kSimplexStrictTol) {
          throw Error("GameSpec: dynamics depend on mu but are declared independent");
        }
      }
    }
  }
}

long long CountDeterministicPolicies(const GameSpec& game, long long cap) {
  long long count = 1;
  const long long cells = static_cast<long long>(game.horizon) * game.num_states;
  for (long long i = 0; i < cells; ++i) {
    if (count > cap / game.num_actions) return cap + 1;
    count *= game.num_actions;
  }
  return count;
}

// -- Policies -----------------------------------------------------------

DeterministicPolicy DeterministicPolicy::Constant(const GameSpec& game,
                                                  int action) {
  DeterministicPolicy p;
  p.horizon = game.horizon;
  p.num_states = game.num_states;
  p.actions.assign(static_cast<size_t>(game.horizon) * game.num_states, action);
  return p;
}

StochasticPolicy StochasticPolicy::Uniform(const GameSpec& game) {
  StochasticPolicy p;
  p.horizon = game.horizon;
  p.num_states = game.num_states;
  p.num_actions = game.num_actions;
  p.probs.assign(
      static_cast<size_t>(game.horizon) * game.num_states * game.num_actions,
      1.0 / game.num_actions);
  return p;
}

StochasticPolicy StochasticPolicy::FromRow(const GameSpec& game, Vec row) {
  if (game.horizon != 1 || game.num_states != 1 ||
      static_cast<int>(row.size()) != game.num_actions) {
    throw DimensionMismatch("FromRow needs a one-state one-step game");
  }
  StochasticPolicy p;
  p.horizon = 1;
  p.num_states = 1;
  p.num_actions = game.num_actions;
  p.probs = NormalizedSimplex(std::move(row), "StochasticPolicy row");
  return p;
}

void StochasticPolicy::Normalize() {
  for (int t = 0; t < horizon; ++t) {
    for (int x = 0; x < num_states; ++x) {
      Vec row(num_actions);
      for (int a = 0; a < num_actions; ++a) row[a] = prob(t, x, a);
      row = NormalizedSimplex(std::move(row), "StochasticPolicy row");
      for (int a = 0; a < num_actions; ++a) prob(t, x, a) = row[a];
    }
  }
}

namespace {

void CheckDetPolicyShape(const GameSpec& game,
                         const DeterministicPolicy& policy) {
  if (policy.horizon != game.horizon || policy.num_states != game.num_states ||
      policy.actions.size() !=
          static_cast<size_t>(game.horizon) * game.num_states) {
    throw DimensionMismatch("deterministic policy does not match the game");
  }
  for (int a : policy.actions) {
    if (a < 0 || a >= game.num_actions) {
      throw DimensionMismatch("policy action index out of range");
    }
  }
}

}  // namespace

StochasticPolicy ToStochastic(const GameSpec& game,
                              const DeterministicPolicy& policy) {
  CheckDetPolicyShape(game, policy);
  StochasticPolicy p;
  p.horizon = game.horizon;
  p.num_states = game.num_states;
  p.num_actions = game.num_actions;
  p.probs.assign(
      static_cast<size_t>(game.horizon) * game.num_states * game.num_actions,
      0.0);
  for (int t = 0; t < game.horizon; ++t) {
    for (int x = 0; x < game.num_states; ++x) {
      p.prob(t, x, policy.action(t, x)) = 1.0;
    }
  }
  return p;
}

PolicyDistribution PolicyDistribution::Dirac(DeterministicPolicy policy) {
  PolicyDistribution nu;
  nu.policies.push_back(std::move(policy));
  nu.weights.push_back(1.0);
  return nu;
}

void PolicyDistribution::Canonicalize() {
  std::map<DeterministicPolicy, double> merged;
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) {
    if (weights[i] < 0.0) throw InvalidSimplex("PolicyDistribution: negative weight");
    if (weights[i] == 0.0) continue;
    merged[policies[i]] += weights[i];
    sum += weights[i];
  }
  if (merged.empty() || std::abs(sum - 1.0) > kSimplexRepairTol) {
    throw InvalidSimplex("PolicyDistribution weights sum to " + std::to_string(sum));
  }
  policies.clear();
  weights.clear();
  for (auto& [policy, weight] : merged) {
    policies.push_back(policy);
    weights.push_back(weight / sum);
  }
}

double PolicyDistribution::WeightOf(const DeterministicPolicy& policy) const {
  for (int i = 0; i < size(); ++i) {
    if (policies[i] == policy) return weights[i];
  }
  return 0.0;
}

bool PolicyDistribution::operator==(const PolicyDistribution& o) const {
  if (policies != o.policies) return false;
  for (int i = 0; i < size(); ++i) {
    if (std::abs(weights[i] - o.weights[i]) > kSimplexStrictTol) return false;
  }
  return true;
}

QTable QTable::Zeros(const GameSpec& game) {
  QTable q;
  q.horizon = game.horizon;
  q.num_states = game.num_states;
  q.num_actions = game.num_actions;
  q.values.assign(
      static_cast<size_t>(game.horizon) * game.num_states * game.num_actions,
      0.0);
  return q;
}

CorrelationDevice CorrelationDevice::Dirac(PolicyDistribution nu) {
  CorrelationDevice rho;
  rho.atoms.push_back(std::move(nu));
  rho.weights.push_back(1.0);
  return rho;
}

void CorrelationDevice::Normalize() {
  if (atoms.empty()) throw InvalidSimplex("CorrelationDevice: no atoms");
  weights = NormalizedSimplex(std::move(weights), "CorrelationDevice weights");
  for (auto& nu : atoms) nu.Canonicalize();
}

// -- Flows --------------------------------------------------------------

namespace {

void CheckPolicyShape(const GameSpec& game, const StochasticPolicy& policy) {
  if (policy.horizon != game.horizon || policy.num_states != game.num_states ||
      policy.num_actions != game.num_actions) {
    throw DimensionMismatch("policy does not match the game");
  }
}

void CheckFlowShape(const GameSpec& game, const MeanFieldFlow& flow) {
  if (flow.horizon() != game.horizon) {
    throw DimensionMismatch("flow has the wrong horizon");
  }
  for (const auto& row : flow.rows) {
    if (static_cast<int>(row.size()) != game.mf_dim()) {
      throw DimensionMismatch("flow row does not span the mean-field support");
    }
  }
}

// Action marginal of a policy at (t) given the state occupancy at t.
Vec ActionMarginal(const GameSpec& game, const StochasticPolicy& policy,
                   const Vec& occupancy, int t) {
  Vec marginal(game.num_actions, 0.0);
  for (int x = 0; x < game.num_states; ++x) {
    if (occupancy[x] == 0.0) continue;
    for (int a = 0; a < game.num_actions; ++a) {
      marginal[a] += occupancy[x] * policy.prob(t, x, a);
    }
  }
  return marginal;
}

// One forward step of a state occupancy under `policy`, with transitions
// evaluated at the given mean-field row.
Vec StepOccupancy(const GameSpec& game, const StochasticPolicy& policy, int t,
                  const Vec& occupancy, const Vec& mf_row) {
  Vec next(game.num_states, 0.0);
  for (int x = 0; x < game.num_states; ++x) {
    if (occupancy[x] == 0.0) continue;
    for (int a = 0; a < game.num_actions; ++a) {
      const double mass = occupancy[x] * policy.prob(t, x, a);
      if (mass == 0.0) continue;
      const Vec row = game.transition(t, x, a, mf_row);
      for (int y = 0; y < game.num_states; ++y) next[y] += mass * row[y];
    }
  }
  return next;
}

}  // namespace

MeanFieldFlow PolicyFlow(const GameSpec& game, const StochasticPolicy& policy,
                         const MeanFieldFlow& population) {
  CheckPolicyShape(game, policy);
  CheckFlowShape(game, population);
  MeanFieldFlow flow;
  if (game.is_static()) {
    flow.rows.push_back(ActionMarginal(game, policy, Vec{1.0}, 0));
    return flow;
  }
  Vec occupancy = game.mu0;
  flow.rows.push_back(occupancy);
  for (int t = 0; t + 1 < game.horizon; ++t) {
    occupancy = StepOccupancy(game, policy, t, occupancy, population.row(t));
    flow.rows.push_back(occupancy);
  }
  return flow;
}

MeanFieldFlow SelfConsistentFlow(const GameSpec& game,
                                 const StochasticPolicy& policy) {
  CheckPolicyShape(game, policy);
  MeanFieldFlow flow;
  if (game.is_static()) {
    flow.rows.push_back(ActionMarginal(game, policy, Vec{1.0}, 0));
    return flow;
  }
  Vec occupancy = game.mu0;
  flow.rows.push_back(occupancy);
  for (int t = 0; t + 1 < game.horizon; ++t) {
    occupancy = StepOccupancy(game, policy, t, occupancy, flow.rows[t]);
    flow.rows.push_back(occupancy);
  }
  return flow;
}

PopulationFlowResult PopulationFlow(const GameSpec& game,
                                    const PolicyDistribution& nu) {
  if (nu.size() == 0) throw Error("PopulationFlow: empty distribution");
  PopulationFlowResult result;
  const int n = nu.size();
  result.per_policy.resize(n);

  if (game.is_static()) {
    Vec aggregate(game.num_actions, 0.0);
    for (int i = 0; i < n; ++i) {
      CheckDetPolicyShape(game, nu.policies[i]);
      Vec marginal(game.num_actions, 0.0);
      marginal[nu.policies[i].action(0, 0)] = 1.0;
      for (int a = 0; a < game.num_actions; ++a) {
        aggregate[a] += nu.weights[i] * marginal[a];
      }
      result.per_policy[i].rows.push_back(std::move(marginal));
    }
    result.aggregate.rows.push_back(std::move(aggregate));
    return result;
  }

  std::vector<StochasticPolicy> stoch;
  stoch.reserve(n);
  for (const auto& policy : nu.policies) stoch.push_back(ToStochastic(game, policy));

  std::vector<Vec> occupancy(n, game.mu0);
  Vec aggregate = game.mu0;
  for (int i = 0; i < n; ++i) result.per_policy[i].rows.push_back(game.mu0);
  result.aggregate.rows.push_back(aggregate);

  for (int t = 0; t + 1 < game.horizon; ++t) {
    Vec next_aggregate(game.num_states, 0.0);
    for (int i = 0; i < n; ++i) {
      occupancy[i] = StepOccupancy(game, stoch[i], t, occupancy[i], aggregate);
      result.per_policy[i].rows.push_back(occupancy[i]);
      for (int x = 0; x < game.num_states; ++x) {
        next_aggregate[x] += nu.weights[i] * occupancy[i][x];
      }
    }
    aggregate = std::move(next_aggregate);
    result.aggregate.rows.push_back(aggregate);
  }
  return result;
}

MeanFieldFlow AggregateFlow(const GameSpec& game, const PolicyDistribution& nu) {
  return PopulationFlow(game, nu).aggregate;
}

Mat StateOccupancy(const GameSpec& game, const StochasticPolicy& policy,
                   const MeanFieldFlow& population) {
  if (game.is_static()) return Mat{Vec{1.0}};
  return PolicyFlow(game, policy, population).rows;
}

// -- Payoffs ------------------------------------------------------------

double Payoff(const GameSpec& game, const StochasticPolicy& policy,
              const MeanFieldFlow& population) {
  CheckPolicyShape(game, policy);
  CheckFlowShape(game, population);
  if (game.is_static()) {
    const Vec& mu = population.row(0);
    double value = 0.0;
    for (int a = 0; a < game.num_actions; ++a) {
      const double p = policy.prob(0, 0, a);
      if (p > 0.0) value += p * game.reward(0, 0, a, mu);
    }
    return value;
  }
  const Mat occupancy = StateOccupancy(game, policy, population);
  double value = 0.0;
  for (int t = 0; t < game.horizon; ++t) {
    const Vec& mu = population.row(t);
    for (int x = 0; x < game.num_states; ++x) {
      if (occupancy[t][x] == 0.0) continue;
      double r_pi = 0.0;
      for (int a = 0; a < game.num_actions; ++a) {
        const double p = policy.prob(t, x, a);
        if (p > 0.0) r_pi += p * game.reward(t, x, a, mu);
      }
      value += occupancy[t][x] * r_pi;
    }
  }
  return value;
}

double Payoff(const GameSpec& game, const DeterministicPolicy& policy,
              const MeanFieldFlow& population) {
  return Payoff(game, ToStochastic(game, policy), population);
}

double MixturePayoff(const GameSpec& game, const PolicyDistribution& nu,
                     const MeanFieldFlow& population) {
  double value = 0.0;
  for (int i = 0; i < nu.size(); ++i) {
    value += nu.weights[i] * Payoff(game, nu.policies[i], population);
  }
  return value;
}

// -- Q values and best responses ----------------------------------------

QTable OnPolicyQ(const GameSpec& game, const StochasticPolicy& policy,
                 const MeanFieldFlow& population) {
  CheckPolicyShape(game, policy);
  CheckFlowShape(game, population);
  QTable q = QTable::Zeros(game);
  for (int t = game.horizon - 1; t >= 0; --t) {
    const Vec& mu = population.row(t);
    for (int x = 0; x < game.num_states; ++x) {
      for (int a = 0; a < game.num_actions; ++a) {
        double value = game.reward(t, x, a, mu);
        if (t + 1 < game.horizon) {
          const Vec row = game.transition(t, x, a, mu);
          for (int y = 0; y < game.num_states; ++y) {
            if (row[y] == 0.0) continue;
            double next = 0.0;
            for (int b = 0; b < game.num_actions; ++b) {
              next += policy.prob(t + 1, y, b) * q.at(t + 1, y, b);
            }
            value += row[y] * next;
          }
        }
        q.at(t, x, a) = value;
      }
    }
  }
  return q;
}

BestResponseResult BestResponse(const GameSpec& game,
                                const MeanFieldFlow& population) {
  CheckFlowShape(game, population);
  Vec rewards(static_cast<size_t>(game.horizon) * game.num_states *
              game.num_actions);
  for (int t = 0; t < game.horizon; ++t) {
    const Vec& mu = population.row(t);
    for (int x = 0; x < game.num_states; ++x) {
      for (int a = 0; a < game.num_actions; ++a) {
        rewards[(static_cast<size_t>(t) * game.num_states + x) * game.num_actions +
                a] = game.reward(t, x, a, mu);
      }
    }
  }
  BestResponseResult result = BestResponseToTables(game, rewards, population);
  result.value = Payoff(game, result.policy, population);
  return result;
}

BestResponseResult BestResponseToTables(const GameSpec& game,
                                        const Vec& reward_table,
                                        const MeanFieldFlow& transition_flow) {
  BestResponseResult result;
  result.policy.horizon = game.horizon;
  result.policy.num_states = game.num_states;
  result.policy.actions.assign(
      static_cast<size_t>(game.horizon) * game.num_states, 0);

  auto table_at = [&](int t, int x, int a) {
    return reward_table[(static_cast<size_t>(t) * game.num_states + x) *
                            game.num_actions +
                        a];
  };

  Vec value_next(game.num_states, 0.0);
  for (int t = game.horizon - 1; t >= 0; --t) {
    Vec value(game.num_states);
    for (int x = 0; x < game.num_states; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      int best_action = 0;
      for (int a = 0; a < game.num_actions; ++a) {
        double q = table_at(t, x, a);
        if (t + 1 < game.horizon) {
          const Vec row = game.transition(t, x, a, transition_flow.row(t));
          for (int y = 0; y < game.num_states; ++y) q += row[y] * value_next[y];
        }
        if (q > best) {
          best = q;
          best_action = a;
        }
      }
      value[x] = best;
      result.policy.action(t, x) = best_action;
    }
    value_next = std::move(value);
  }
  result.value = game.is_static() ? value_next[0] : Dot(game.mu0, value_next);
  return result;
}

// -- Product-form decomposition -----------------------------------------

PolicyDistribution DecomposeStochastic(const GameSpec& game,
                                       const StochasticPolicy& policy,
                                       long long max_support) {
  CheckPolicyShape(game, policy);
  const int cells = game.horizon * game.num_states;
  std::vector<std::vector<int>> support(cells);
  long long count = 1;
  for (int c = 0; c < cells; ++c) {
    const int t = c / game.num_states;
    const int x = c % game.num_states;
    for (int a = 0; a < game.num_actions; ++a) {
      if (policy.prob(t, x, a) > 0.0) support[c].push_back(a);
    }
    if (count > max_support / static_cast<long long>(support[c].size()) &&
        count * static_cast<long long>(support[c].size()) > max_support) {
      throw SupportTooLarge("product-form support exceeds " +
                            std::to_string(max_support));
    }
    count *= static_cast<long long>(support[c].size());
  }

  PolicyDistribution nu;
  DeterministicPolicy current;
  current.horizon = game.horizon;
  current.num_states = game.num_states;
  current.actions.assign(cells, 0);

  std::function<void(int, double)> expand = [&](int c, double weight) {
    if (c == cells) {
      nu.policies.push_back(current);
      nu.weights.push_back(weight);
      return;
    }
    const int t = c / game.num_states;
    const int x = c % game.num_states;
    for (int a : support[c]) {
      current.actions[c] = a;
      expand(c + 1, weight * policy.prob(t, x, a));
    }
  };
  expand(0, 1.0);
  nu.Canonicalize();
  return nu;
}

// -- Marginalization -----------------------------------------------------

StochasticPolicy Marginalization(const GameSpec& game,
                                 const CorrelationDevice& device) {
  if (!game.mu_independent_dynamics) {
    throw DynamicsDependOnMu("marginalization needs mu-independent dynamics");
  }
  // Total recommendation mass per deterministic policy.
  std::map<DeterministicPolicy, double> mass;
  for (int k = 0; k < device.size(); ++k) {
    const auto& nu = device.atoms[k];
    for (int i = 0; i < nu.size(); ++i) {
      mass[nu.policies[i]] += device.weights[k] * nu.weights[i];
    }
  }

  StochasticPolicy result = StochasticPolicy::Uniform(game);
  Mat numerator(game.horizon,
                Vec(static_cast<size_t>(game.num_states) * game.num_actions, 0.0));
  Mat denominator(game.horizon, Vec(game.num_states, 0.0));
  for (const auto& [policy, weight] : mass) {
    const StochasticPolicy stoch = ToStochastic(game, policy);
    const Mat occupancy = game.is_static()
                              ? Mat(1, Vec{1.0})
                              : SelfConsistentFlow(game, stoch).rows;
    for (int t = 0; t < game.horizon; ++t) {
      for (int x = 0; x < game.num_states; ++x) {
        const double w = weight * occupancy[t][x];
        if (w == 0.0) continue;
        numerator[t][static_cast<size_t>(x) * game.num_actions +
                     policy.action(t, x)] += w;
        denominator[t][x] += w;
      }
    }
  }
  for (int t = 0; t < game.horizon; ++t) {
    for (int x = 0; x < game.num_states; ++x) {
      if (denominator[t][x] == 0.0) continue;  // keep the uniform row
      for (int a = 0; a < game.num_actions; ++a) {
        result.prob(t, x, a) =
            numerator[t][static_cast<size_t>(x) * game.num_actions + a] /
            denominator[t][x];
      }
    }
  }
  return result;
}

// -- Enumeration ---------------------------------------------------------

std::vector<DeterministicPolicy> EnumerateDeterministicPolicies(
    const GameSpec& game, long long cap) {
  const long long count = CountDeterministicPolicies(game, cap);
  if (count > cap) {
    throw PolicySpaceTooLarge("deterministic policy space exceeds " +
                              std::to_string(cap));
  }
  const int cells = game.horizon * game.num_states;
  std::vector<DeterministicPolicy> all;
  all.reserve(count);
  DeterministicPolicy current;
  current.horizon = game.horizon;
  current.num_states = game.num_states;
  current.actions.assign(cells, 0);
  while (true) {
    all.push_back(current);
    int c = cells - 1;
    while (c >= 0 && current.actions[c] == game.num_actions - 1) {
      current.actions[c] = 0;
      --c;
    }
    if (c < 0) break;
    ++current.actions[c];
  }
  return all;
}

}  // namespace mfg
