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

#include "mfglab/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mfglab/rng.h"

namespace mfg {

namespace {

constexpr double kFlowGroupTol = 1e-9;

struct DeviceFlows {
  std::vector<MeanFieldFlow> flows;  // aggregate flow per atom
  Vec weights;
};

DeviceFlows AtomFlows(const GameSpec& game, const CorrelationDevice& rho) {
  DeviceFlows out;
  out.weights = rho.weights;
  out.flows.reserve(rho.size());
  for (const auto& nu : rho.atoms) {
    out.flows.push_back(AggregateFlow(game, nu));
  }
  return out;
}

Vec AveragedRewardTable(const GameSpec& game,
                        const std::vector<MeanFieldFlow>& flows,
                        const Vec& weights) {
  Vec table(static_cast<size_t>(game.horizon) * game.num_states *
                game.num_actions,
            0.0);
  for (size_t k = 0; k < flows.size(); ++k) {
    if (weights[k] == 0.0) continue;
    for (int t = 0; t < game.horizon; ++t) {
      const Vec& mu = flows[k].row(t);
      for (int x = 0; x < game.num_states; ++x) {
        for (int a = 0; a < game.num_actions; ++a) {
          table[(static_cast<size_t>(t) * game.num_states + x) *
                    game.num_actions +
                a] += weights[k] * game.reward(t, x, a, mu);
        }
      }
    }
  }
  return table;
}

MeanFieldFlow AveragedFlow(const GameSpec& game,
                           const std::vector<MeanFieldFlow>& flows,
                           const Vec& weights) {
  MeanFieldFlow avg;
  avg.rows.assign(game.horizon, Vec(game.mf_dim(), 0.0));
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) total = 1.0;
  for (size_t k = 0; k < flows.size(); ++k) {
    for (int t = 0; t < game.horizon; ++t) {
      for (int i = 0; i < game.mf_dim(); ++i) {
        avg.rows[t][i] += weights[k] / total * flows[k].row(t)[i];
      }
    }
  }
  return avg;
}

}  // namespace

DeterministicPolicy PolicySwap::Apply(const DeterministicPolicy& policy) const {
  for (const auto& [from, to] : mapping) {
    if (from == policy) return to;
  }
  return policy;
}

std::vector<DeterministicPolicy> CandidateDeviations(
    const GameSpec& game, const std::vector<MeanFieldFlow>& flows,
    const Vec& weights, const std::vector<DeterministicPolicy>& support,
    long long enumeration_cap) {
  std::set<DeterministicPolicy> out(support.begin(), support.end());
  if (CountDeterministicPolicies(game, enumeration_cap) <= enumeration_cap) {
    for (auto& policy : EnumerateDeterministicPolicies(game, enumeration_cap)) {
      out.insert(std::move(policy));
    }
  } else {
    for (const auto& flow : flows) {
      out.insert(BestResponse(game, flow).policy);
    }
    const Vec table = AveragedRewardTable(game, flows, weights);
    out.insert(
        BestResponseToTables(game, table, AveragedFlow(game, flows, weights))
            .policy);
  }
  return {out.begin(), out.end()};
}

GapReport Exploitability(const GameSpec& game, const PolicyDistribution& nu) {
  const MeanFieldFlow flow = AggregateFlow(game, nu);
  const BestResponseResult br = BestResponse(game, flow);
  GapReport report;
  report.gap = br.value - MixturePayoff(game, nu, flow);
  report.deviation = br.policy;
  return report;
}

GapReport CceGap(const GameSpec& game, const CorrelationDevice& rho) {
  const DeviceFlows df = AtomFlows(game, rho);
  double recommended = 0.0;
  for (int k = 0; k < rho.size(); ++k) {
    recommended +=
        rho.weights[k] * MixturePayoff(game, rho.atoms[k], df.flows[k]);
  }
  const std::vector<DeterministicPolicy> candidates =
      CandidateDeviations(game, df.flows, df.weights, DeviceSupport(rho));
  GapReport report;
  report.gap = -std::numeric_limits<double>::infinity();
  for (const auto& policy : candidates) {
    double value = 0.0;
    for (int k = 0; k < rho.size(); ++k) {
      value += rho.weights[k] * Payoff(game, policy, df.flows[k]);
    }
    if (value - recommended > report.gap) {
      report.gap = value - recommended;
      report.deviation = policy;
    }
  }
  return report;
}

std::vector<DeterministicPolicy> DeviceSupport(const CorrelationDevice& rho) {
  std::set<DeterministicPolicy> support;
  for (int k = 0; k < rho.size(); ++k) {
    if (rho.weights[k] == 0.0) continue;
    const auto& nu = rho.atoms[k];
    for (int i = 0; i < nu.size(); ++i) {
      if (nu.weights[i] > 0.0) support.insert(nu.policies[i]);
    }
  }
  return {support.begin(), support.end()};
}

double RecommendationMass(const CorrelationDevice& rho,
                          const DeterministicPolicy& policy) {
  double mass = 0.0;
  for (int k = 0; k < rho.size(); ++k) {
    mass += rho.weights[k] * rho.atoms[k].WeightOf(policy);
  }
  return mass;
}

GapReport CeGap(const GameSpec& game, const CorrelationDevice& rho) {
  const DeviceFlows df = AtomFlows(game, rho);
  const std::vector<DeterministicPolicy> support = DeviceSupport(rho);

  GapReport report;
  report.swap = PolicySwap{};
  report.gap = 0.0;
  report.per_atom.reserve(support.size());

  // The sup over swap maps separates across recommended policies: each
  // recommendation independently picks its best replacement.
  for (const auto& recommended : support) {
    Vec mass(rho.size());
    double base = 0.0;
    for (int k = 0; k < rho.size(); ++k) {
      mass[k] = rho.weights[k] * rho.atoms[k].WeightOf(recommended);
      if (mass[k] > 0.0) base += mass[k] * Payoff(game, recommended, df.flows[k]);
    }
    const std::vector<DeterministicPolicy> candidates = CandidateDeviations(
        game, df.flows, mass, {recommended});
    double best_gain = 0.0;  // the identity swap attains 0
    DeterministicPolicy best = recommended;
    for (const auto& policy : candidates) {
      double value = 0.0;
      for (int k = 0; k < rho.size(); ++k) {
        if (mass[k] > 0.0) value += mass[k] * Payoff(game, policy, df.flows[k]);
      }
      if (value - base > best_gain) {
        best_gain = value - base;
        best = policy;
      }
    }
    report.gap += best_gain;
    report.per_atom.push_back(best_gain);
    report.swap->mapping.emplace_back(recommended, best);
  }
  return report;
}

GapReport HomogeneousCeGap(const GameSpec& game, const HomogeneousDevice& rho) {
  GapReport report;
  report.per_atom.reserve(rho.size());
  for (int k = 0; k < rho.size(); ++k) {
    const MeanFieldFlow flow = SelfConsistentFlow(game, rho.atoms[k]);
    const BestResponseResult br = BestResponse(game, flow);
    const double exploitability = br.value - Payoff(game, rho.atoms[k], flow);
    report.per_atom.push_back(exploitability);
    report.gap += rho.weights[k] * std::max(0.0, exploitability);
    if (!report.deviation || exploitability > 0.0) report.deviation = br.policy;
  }
  return report;
}

CorrelationDevice ConditionalDevice(const CorrelationDevice& rho,
                                    const DeterministicPolicy& policy) {
  CorrelationDevice conditional;
  double mass = 0.0;
  for (int k = 0; k < rho.size(); ++k) {
    const double w = rho.weights[k] * rho.atoms[k].WeightOf(policy);
    if (w > 0.0) {
      conditional.atoms.push_back(rho.atoms[k]);
      conditional.weights.push_back(w);
      mass += w;
    }
  }
  if (mass <= 0.0) {
    throw ZeroMassRecommendation("policy has zero recommendation mass");
  }
  for (double& w : conditional.weights) w /= mass;
  return conditional;
}

std::vector<ConsistencyGroup> ConsistencyCheck(const GameSpec& game,
                                               const CorrelationDevice& rho) {
  std::vector<ConsistencyGroup> groups;
  std::vector<MeanFieldFlow> flows;
  flows.reserve(rho.size());
  for (const auto& nu : rho.atoms) flows.push_back(AggregateFlow(game, nu));

  std::vector<int> group_of(rho.size(), -1);
  for (int k = 0; k < rho.size(); ++k) {
    for (size_t g = 0; g < groups.size(); ++g) {
      if (LinfDistance(groups[g].flow.rows, flows[k].rows) <= kFlowGroupTol) {
        group_of[k] = static_cast<int>(g);
        break;
      }
    }
    if (group_of[k] < 0) {
      group_of[k] = static_cast<int>(groups.size());
      groups.push_back(ConsistencyGroup{flows[k], {}, 0.0});
    }
    groups[group_of[k]].atom_indices.push_back(k);
  }

  for (auto& group : groups) {
    PolicyDistribution mixed;
    double total = 0.0;
    for (int k : group.atom_indices) total += rho.weights[k];
    for (int k : group.atom_indices) {
      const auto& nu = rho.atoms[k];
      for (int i = 0; i < nu.size(); ++i) {
        mixed.policies.push_back(nu.policies[i]);
        mixed.weights.push_back(rho.weights[k] / total * nu.weights[i]);
      }
    }
    mixed.Canonicalize();
    group.residual =
        LinfDistance(AggregateFlow(game, mixed).rows, group.flow.rows);
  }
  return groups;
}

double MonotonicityViolation(const GameSpec& game, int grid_resolution,
                             uint64_t seed) {
  const int dim = game.mf_dim();
  if (dim == 1) return 0.0;  // the simplex is a point
  // Probe vector r(., mu): per action for static games, per state
  // (action-averaged) otherwise.
  auto probe = [&](int t, const Vec& mu) {
    Vec r(dim, 0.0);
    if (game.is_static()) {
      for (int a = 0; a < dim; ++a) r[a] = game.reward(0, 0, a, mu);
    } else {
      for (int x = 0; x < dim; ++x) {
        for (int a = 0; a < game.num_actions; ++a) {
          r[x] += game.reward(t, x, a, mu) / game.num_actions;
        }
      }
    }
    return r;
  };

  std::vector<Mat> samples;
  if (dim <= 3 && game.horizon == 1) {
    // Barycentric grid.
    for (int i = 0; i <= grid_resolution; ++i) {
      for (int j = 0; i + j <= grid_resolution; ++j) {
        Vec mu(dim, 0.0);
        mu[0] = static_cast<double>(i) / grid_resolution;
        if (dim > 1) mu[1] = static_cast<double>(j) / grid_resolution;
        if (dim > 2) {
          mu[2] = 1.0 - mu[0] - mu[1];
        } else {
          mu[1] = 1.0 - mu[0];
        }
        if (dim == 2 && j > 0) continue;
        samples.push_back(Mat{mu});
      }
    }
  }
  RandomStream rng(seed);
  for (int i = 0; i < grid_resolution; ++i) {
    Mat flow(game.horizon);
    for (int t = 0; t < game.horizon; ++t) flow[t] = rng.NextSimplex(dim);
    samples.push_back(std::move(flow));
  }

  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < samples.size(); ++i) {
    for (size_t j = i + 1; j < samples.size(); ++j) {
      double total = 0.0;
      for (int t = 0; t < game.horizon; ++t) {
        const Vec& mu = samples[i][t];
        const Vec& mu_other = samples[j][t];
        const Vec r = probe(t, mu);
        const Vec r_other = probe(t, mu_other);
        for (int d = 0; d < dim; ++d) {
          total += (mu[d] - mu_other[d]) * (r[d] - r_other[d]);
        }
      }
      worst = std::max(worst, total);
    }
  }
  return worst;
}

std::optional<std::pair<DeterministicPolicy, double>> FindStrictlyDominant(
    const GameSpec& game, int grid_resolution) {
  const std::vector<DeterministicPolicy> all =
      EnumerateDeterministicPolicies(game, 1000);
  if (all.size() == 1) return std::make_pair(all[0], 0.0);

  std::vector<MeanFieldFlow> probes;
  if (game.is_static() && game.num_actions <= 3) {
    for (int i = 0; i <= grid_resolution; ++i) {
      for (int j = 0; i + j <= grid_resolution; ++j) {
        Vec mu(game.num_actions, 0.0);
        mu[0] = static_cast<double>(i) / grid_resolution;
        if (game.num_actions == 2) {
          if (j > 0) continue;
          mu[1] = 1.0 - mu[0];
        } else {
          mu[1] = static_cast<double>(j) / grid_resolution;
          mu[2] = 1.0 - mu[0] - mu[1];
        }
        probes.push_back(MeanFieldFlow{Mat{mu}});
      }
    }
  } else {
    RandomStream rng(11);
    for (int i = 0; i < std::max(grid_resolution, 8); ++i) {
      Mat rows(game.horizon);
      for (int t = 0; t < game.horizon; ++t) rows[t] = rng.NextSimplex(game.mf_dim());
      probes.push_back(MeanFieldFlow{std::move(rows)});
    }
  }

  Mat payoffs(probes.size(), Vec(all.size()));
  for (size_t p = 0; p < probes.size(); ++p) {
    for (size_t i = 0; i < all.size(); ++i) {
      payoffs[p][i] = Payoff(game, all[i], probes[p]);
    }
  }
  for (size_t i = 0; i < all.size(); ++i) {
    double margin = std::numeric_limits<double>::infinity();
    for (size_t p = 0; p < probes.size() && margin > 0.0; ++p) {
      for (size_t j = 0; j < all.size(); ++j) {
        if (j == i) continue;
        margin = std::min(margin, payoffs[p][i] - payoffs[p][j]);
        if (margin <= 0.0) break;
      }
    }
    if (margin > 0.0) return std::make_pair(all[i], margin);
  }
  return std::nullopt;
}

CorrelationDevice NashToDevice(const PolicyDistribution& nu) {
  return CorrelationDevice::Dirac(nu);
}

PolicyDistribution DeviceToNash(const CorrelationDevice& rho) {
  if (rho.size() != 1) {
    throw NotADirac("device has " + std::to_string(rho.size()) + " atoms");
  }
  return rho.atoms[0];
}

double SwapAdvantage(const GameSpec& game, const CorrelationDevice& rho,
                     const PolicySwap& swap) {
  double advantage = 0.0;
  for (int k = 0; k < rho.size(); ++k) {
    const MeanFieldFlow flow = AggregateFlow(game, rho.atoms[k]);
    const auto& nu = rho.atoms[k];
    for (int i = 0; i < nu.size(); ++i) {
      const DeterministicPolicy deviated = swap.Apply(nu.policies[i]);
      if (deviated == nu.policies[i]) continue;
      advantage += rho.weights[k] * nu.weights[i] *
                   (Payoff(game, deviated, flow) -
                    Payoff(game, nu.policies[i], flow));
    }
  }
  return advantage;
}

}  // namespace mfg
