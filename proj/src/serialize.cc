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

#include "mfglab/serialize.h"

#include <fstream>
#include <sstream>

namespace mfg {

namespace {

json ActionTable(const DeterministicPolicy& policy) {
  json rows = json::array();
  for (int t = 0; t < policy.horizon; ++t) {
    json row = json::array();
    for (int x = 0; x < policy.num_states; ++x) row.push_back(policy.action(t, x));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json ToJson(const DeterministicPolicy& policy) { return ActionTable(policy); }

DeterministicPolicy DeterministicPolicyFromJson(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw Error("deterministic policy: expected a T x |X| integer table");
  }
  DeterministicPolicy policy;
  policy.horizon = static_cast<int>(j.size());
  policy.num_states = static_cast<int>(j[0].size());
  for (const auto& row : j) {
    if (static_cast<int>(row.size()) != policy.num_states) {
      throw Error("deterministic policy: ragged table");
    }
    for (const auto& a : row) policy.actions.push_back(a.get<int>());
  }
  return policy;
}

json ToJson(const StochasticPolicy& policy) {
  json j;
  j["T"] = policy.horizon;
  j["num_states"] = policy.num_states;
  j["num_actions"] = policy.num_actions;
  json rows = json::array();
  for (int t = 0; t < policy.horizon; ++t) {
    for (int x = 0; x < policy.num_states; ++x) {
      json row = json::array();
      for (int a = 0; a < policy.num_actions; ++a) row.push_back(policy.prob(t, x, a));
      rows.push_back(std::move(row));
    }
  }
  j["rows"] = std::move(rows);
  return j;
}

StochasticPolicy StochasticPolicyFromJson(const json& j) {
  StochasticPolicy policy;
  policy.horizon = j.at("T").get<int>();
  policy.num_states = j.at("num_states").get<int>();
  policy.num_actions = j.at("num_actions").get<int>();
  for (const auto& row : j.at("rows")) {
    for (const auto& v : row) policy.probs.push_back(v.get<double>());
  }
  if (static_cast<int>(policy.probs.size()) !=
      policy.horizon * policy.num_states * policy.num_actions) {
    throw Error("stochastic policy: row shape mismatch");
  }
  policy.Normalize();
  return policy;
}

json ToJson(const GameSpec& game, const MeanFieldFlow& flow) {
  json j;
  j["T"] = flow.horizon();
  j["num_states"] = game.num_states;
  j["num_actions"] = game.num_actions;
  j["rows"] = flow.rows;
  return j;
}

MeanFieldFlow FlowFromJson(const json& j) {
  MeanFieldFlow flow;
  for (const auto& row : j.at("rows")) {
    flow.rows.push_back(row.get<Vec>());
  }
  return flow;
}

json ToJson(const PolicyDistribution& nu) {
  json atoms = json::array();
  for (int i = 0; i < nu.size(); ++i) {
    atoms.push_back({{"weight", nu.weights[i]}, {"policy", ToJson(nu.policies[i])}});
  }
  return atoms;
}

PolicyDistribution PolicyDistributionFromJson(const json& j) {
  PolicyDistribution nu;
  for (const auto& atom : j) {
    nu.weights.push_back(atom.at("weight").get<double>());
    nu.policies.push_back(DeterministicPolicyFromJson(atom.at("policy")));
  }
  nu.Canonicalize();
  return nu;
}

json ToJson(const CorrelationDevice& rho) {
  json atoms = json::array();
  for (int k = 0; k < rho.size(); ++k) {
    atoms.push_back({{"weight", rho.weights[k]}, {"nu", ToJson(rho.atoms[k])}});
  }
  return json{{"atoms", std::move(atoms)}};
}

CorrelationDevice DeviceFromJson(const json& j) {
  CorrelationDevice rho;
  for (const auto& atom : j.at("atoms")) {
    rho.weights.push_back(atom.at("weight").get<double>());
    rho.atoms.push_back(PolicyDistributionFromJson(atom.at("nu")));
  }
  rho.Normalize();
  return rho;
}

json ToJson(const GapReport& report) {
  json j;
  j["gap"] = report.gap;
  if (report.deviation) j["deviation"] = ToJson(*report.deviation);
  if (report.swap) {
    json mapping = json::array();
    for (const auto& [from, to] : report.swap->mapping) {
      mapping.push_back({{"from", ToJson(from)}, {"to", ToJson(to)}});
    }
    j["swap"] = std::move(mapping);
  }
  if (!report.per_atom.empty()) j["per_atom"] = report.per_atom;
  return j;
}

json ToJson(const LearningTrace& trace, const GameSpec& game) {
  json steps = json::array();
  for (const auto& step : trace.steps) {
    json s;
    s["iteration"] = step.iteration;
    s["payoff"] = step.payoff;
    s["flow"] = ToJson(game, step.flow);
    if (step.nu.size() > 0) s["nu"] = ToJson(step.nu);
    steps.push_back(std::move(s));
  }
  json j;
  j["algorithm"] = trace.algorithm;
  if (trace.eta > 0.0) j["eta"] = trace.eta;
  j["steps"] = std::move(steps);
  return j;
}

std::string TraceCsv(const GameSpec& game, const LearningTrace& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,step_payoff,external_regret_so_far,swap_regret_so_far";
  const bool per_action = game.is_static();
  if (per_action) {
    for (int a = 0; a < game.num_actions; ++a) out << ",prob_action_" << a;
  }
  out << "\n";
  const Vec external = ExternalRegretPrefixes(game, trace);
  const Vec swap = SwapRegretPrefixes(game, trace);
  for (size_t j = 0; j < trace.steps.size(); ++j) {
    const auto& step = trace.steps[j];
    out << step.iteration << "," << step.payoff << "," << external[j] << ","
        << swap[j];
    if (per_action) {
      for (int a = 0; a < game.num_actions; ++a) out << "," << step.flow.row(0)[a];
    }
    out << "\n";
  }
  return out.str();
}

json ToJson(const PsroResult& result) {
  json pool = json::array();
  for (const auto& policy : result.pool) pool.push_back(ToJson(policy));
  json j;
  j["pool"] = std::move(pool);
  j["device"] = ToJson(result.device);
  j["iterations_used"] = result.iterations_used;
  j["converged"] = result.converged;
  j["final_gap"] = result.final_gap;
  j["final_cce_gap"] = result.final_cce_gap;
  j["final_ce_gap"] = result.final_ce_gap;
  j["achieved_inner_regret"] = result.achieved_inner_regret;
  return j;
}

std::string PsroOuterCsv(const PsroResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "outer,pool_size,inner_rounds,inner_regret,gap\n";
  for (size_t i = 0; i < result.outer_records.size(); ++i) {
    const auto& record = result.outer_records[i];
    out << (i + 1) << "," << record.pool_size << "," << record.inner_rounds
        << "," << record.inner_regret << "," << record.gap << "\n";
  }
  return out.str();
}

json ToJson(const ScalingStudyResult& study) {
  json points = json::array();
  for (const auto& point : study.points) {
    points.push_back({{"N", point.num_players},
                      {"gap_mean", point.gap.mean},
                      {"gap_stderr", point.gap.stderr_},
                      {"samples", point.gap.samples}});
  }
  json j;
  j["points"] = std::move(points);
  j["deviation"] = ToJson(study.deviation);
  j["slope"] = study.slope;
  j["degenerate"] = study.degenerate;
  return j;
}

std::string ScalingCsv(const ScalingStudyResult& study) {
  std::ostringstream out;
  out.precision(17);
  out << "N,gap_mean,gap_stderr,samples\n";
  for (const auto& point : study.points) {
    out << point.num_players << "," << point.gap.mean << ","
        << point.gap.stderr_ << "," << point.gap.samples << "\n";
  }
  return out.str();
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << contents;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace mfg
