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

#include "mfglab/psro.h"

#include <algorithm>
#include <cmath>

#include "mfglab/equilibrium.h"

namespace mfg {

namespace {

// Best response maximizing sum_k weights[k] * J(., flows[k]), exact for
// mu-independent dynamics via one backward induction on the averaged
// rewards. For mu-dependent dynamics, per-flow best responses are added
// as candidates and the winner under the exact objective is returned.
DeterministicPolicy WeightedBestResponse(const GameSpec& game,
                                         const std::vector<MeanFieldFlow>& flows,
                                         const Vec& weights, double* value) {
  Vec table(static_cast<size_t>(game.horizon) * game.num_states *
                game.num_actions,
            0.0);
  Mat flow_sum(game.horizon, Vec(game.mf_dim(), 0.0));
  double total = 0.0;
  for (size_t k = 0; k < flows.size(); ++k) {
    if (weights[k] == 0.0) continue;
    total += weights[k];
    for (int t = 0; t < game.horizon; ++t) {
      const Vec& mu = flows[k].row(t);
      for (int i = 0; i < game.mf_dim(); ++i) flow_sum[t][i] += weights[k] * mu[i];
      for (int x = 0; x < game.num_states; ++x) {
        for (int a = 0; a < game.num_actions; ++a) {
          table[(static_cast<size_t>(t) * game.num_states + x) *
                    game.num_actions +
                a] += weights[k] * game.reward(t, x, a, mu);
        }
      }
    }
  }
  MeanFieldFlow averaged;
  averaged.rows = flow_sum;
  for (auto& row : averaged.rows) {
    for (double& v : row) v /= (total > 0.0 ? total : 1.0);
  }

  std::vector<DeterministicPolicy> candidates;
  candidates.push_back(BestResponseToTables(game, table, averaged).policy);
  if (!game.mu_independent_dynamics) {
    for (const auto& flow : flows) {
      candidates.push_back(BestResponse(game, flow).policy);
    }
  }

  auto objective = [&](const DeterministicPolicy& policy) {
    double v = 0.0;
    for (size_t k = 0; k < flows.size(); ++k) {
      if (weights[k] > 0.0) v += weights[k] * Payoff(game, policy, flows[k]);
    }
    return v;
  };
  DeterministicPolicy best = candidates[0];
  double best_value = objective(best);
  for (size_t i = 1; i < candidates.size(); ++i) {
    const double v = objective(candidates[i]);
    if (v > best_value) {
      best_value = v;
      best = candidates[i];
    }
  }
  if (value != nullptr) *value = best_value;
  return best;
}

bool Contains(const std::vector<DeterministicPolicy>& pool,
              const DeterministicPolicy& policy) {
  return std::find(pool.begin(), pool.end(), policy) != pool.end();
}

}  // namespace

InnerBanditResult InnerBandit(const GameSpec& game,
                              const std::vector<DeterministicPolicy>& pool,
                              MetaSolver& solver, bool track_swap_regret,
                              double epsilon, int max_rounds) {
  if (solver.num_arms() != static_cast<int>(pool.size())) {
    throw DimensionMismatch("InnerBandit: solver arms vs pool size");
  }
  const int n = static_cast<int>(pool.size());

  InnerBanditResult result;
  Vec arm_reward_sums(n, 0.0);
  double played_sum = 0.0;
  // cross[i][k] = sum_t p_t(i) * r_t(k), for swap regret.
  Mat cross;
  if (track_swap_regret) cross.assign(n, Vec(n, 0.0));

  for (int round = 1; round <= max_rounds; ++round) {
    const Vec probs = solver.Probabilities();

    PolicyDistribution nu;
    for (int i = 0; i < n; ++i) {
      if (probs[i] > 0.0) {
        nu.policies.push_back(pool[i]);
        nu.weights.push_back(probs[i]);
      }
    }
    const MeanFieldFlow flow = AggregateFlow(game, nu);
    Vec rewards(n);
    for (int i = 0; i < n; ++i) rewards[i] = Payoff(game, pool[i], flow);

    played_sum += Dot(probs, rewards);
    for (int i = 0; i < n; ++i) {
      arm_reward_sums[i] += rewards[i];
      if (track_swap_regret) {
        for (int k = 0; k < n; ++k) cross[i][k] += probs[i] * rewards[k];
      }
    }

    // Runs of identical recommendations collapse into one atom.
    if (!result.device.atoms.empty() && result.device.atoms.back() == nu) {
      result.device.weights.back() += 1.0;
    } else {
      result.device.atoms.push_back(std::move(nu));
      result.device.weights.push_back(1.0);
    }

    solver.Observe(rewards);
    result.rounds = round;

    double regret = 0.0;
    if (track_swap_regret) {
      for (int i = 0; i < n; ++i) {
        double best = 0.0;
        for (int k = 0; k < n; ++k) best = std::max(best, cross[i][k] - cross[i][i]);
        regret += best;
      }
    } else {
      double best = *std::max_element(arm_reward_sums.begin(),
                                      arm_reward_sums.end());
      regret = best - played_sum;
    }
    result.average_regret = regret / round;
    if (result.average_regret <= epsilon) {
      result.reached_epsilon = true;
      break;
    }
  }
  for (double& w : result.device.weights) w /= result.rounds;
  return result;
}

PsroResult PsroRun(const GameSpec& game, const PsroConfig& config,
                   std::vector<DeterministicPolicy> init_pool) {
  if (init_pool.empty()) {
    init_pool.push_back(DeterministicPolicy::Constant(game, 0));
  }
  PsroResult result;
  result.pool = std::move(init_pool);
  const bool track_swap =
      config.mode == PsroMode::kCe || MinimizesSwapRegret(config.solver);

  for (int outer = 1; outer <= config.max_outer; ++outer) {
    result.iterations_used = outer;
    auto solver = MakeMetaSolver(config.solver,
                                 static_cast<int>(result.pool.size()), config.eta);
    InnerBanditResult inner =
        InnerBandit(game, result.pool, *solver, track_swap, config.epsilon,
                    config.max_inner_rounds);
    result.device = std::move(inner.device);
    result.achieved_inner_regret = inner.average_regret;

    std::vector<MeanFieldFlow> flows;
    flows.reserve(result.device.size());
    double recommended = 0.0;
    for (int k = 0; k < result.device.size(); ++k) {
      flows.push_back(AggregateFlow(game, result.device.atoms[k]));
      recommended += result.device.weights[k] *
                     MixturePayoff(game, result.device.atoms[k], flows.back());
    }

    double gap = 0.0;
    std::vector<DeterministicPolicy> best_responses;  // everything computed
    std::vector<DeterministicPolicy> improving;       // beats improvement_tol
    if (config.mode == PsroMode::kCce) {
      double value = 0.0;
      DeterministicPolicy br =
          WeightedBestResponse(game, flows, result.device.weights, &value);
      gap = value - recommended;
      best_responses.push_back(br);
      if (gap > config.improvement_tol) improving.push_back(br);
    } else {
      for (const auto& recommended_policy : DeviceSupport(result.device)) {
        Vec mass(result.device.size());
        double base = 0.0;
        for (int k = 0; k < result.device.size(); ++k) {
          mass[k] = result.device.weights[k] *
                    result.device.atoms[k].WeightOf(recommended_policy);
          if (mass[k] > 0.0) {
            base += mass[k] * Payoff(game, recommended_policy, flows[k]);
          }
        }
        double value = 0.0;
        DeterministicPolicy br = WeightedBestResponse(game, flows, mass, &value);
        gap += std::max(0.0, value - base);
        best_responses.push_back(br);
        if (value - base > config.improvement_tol) improving.push_back(br);
      }
    }

    PsroOuterRecord record;
    record.pool_size = static_cast<int>(result.pool.size());
    record.inner_rounds = inner.rounds;
    record.inner_regret = inner.average_regret;
    record.gap = gap;
    result.outer_records.push_back(record);
    result.final_gap = gap;

    // The returned device always pairs with the pool it was built over,
    // so the pool only mutates when another outer iteration follows.
    if (outer == config.max_outer) {
      result.converged = gap <= config.epsilon + config.improvement_tol;
      break;
    }
    bool pool_changed = false;
    if (config.drop_init && outer == 1) {
      std::vector<DeterministicPolicy> kept;
      for (const auto& policy : best_responses) {
        if (!Contains(kept, policy)) kept.push_back(policy);
      }
      if (!kept.empty() && kept != result.pool) {
        result.pool = std::move(kept);
        pool_changed = true;
      }
    } else if (gap > config.epsilon + config.improvement_tol) {
      for (auto& policy : improving) {
        if (!Contains(result.pool, policy)) {
          result.pool.push_back(std::move(policy));
          pool_changed = true;
        }
      }
    }
    if (!pool_changed) {
      result.converged = gap <= config.epsilon + config.improvement_tol;
      break;
    }
  }

  result.final_cce_gap = CceGap(game, result.device).gap;
  result.final_ce_gap = CeGap(game, result.device).gap;
  return result;
}

}  // namespace mfg
