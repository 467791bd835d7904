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

#include "mfglab/meta_solvers.h"

#include <algorithm>
#include <cmath>

namespace mfg {

MetaSolverKind ParseMetaSolverKind(const std::string& name) {
  if (name == "pw") return MetaSolverKind::kPolynomialWeights;
  if (name == "rm") return MetaSolverKind::kRegretMatching;
  if (name == "swap-pw") return MetaSolverKind::kSwapPW;
  if (name == "swap-rm") return MetaSolverKind::kSwapRM;
  throw Error("unknown meta-solver: " + name);
}

bool MinimizesSwapRegret(MetaSolverKind kind) {
  return kind == MetaSolverKind::kSwapPW || kind == MetaSolverKind::kSwapRM;
}

// -- PolynomialWeights ----------------------------------------------------

PolynomialWeights::PolynomialWeights(int num_arms, double eta)
    : weights_(num_arms, 1.0), eta_(eta) {
  if (eta <= 0.0) throw Error("PolynomialWeights: eta must be positive");
}

Vec PolynomialWeights::Probabilities() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  Vec p(weights_.size());
  for (size_t i = 0; i < weights_.size(); ++i) p[i] = weights_[i] / total;
  return p;
}

void PolynomialWeights::Observe(const Vec& rewards) {
  if (rewards.size() != weights_.size()) {
    throw DimensionMismatch("PolynomialWeights: reward vector size");
  }
  double top = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) {
    const double factor = 1.0 + eta_ * rewards[i];
    if (factor <= 0.0) {
      throw Error("PolynomialWeights: eta * reward reached -1; lower eta");
    }
    weights_[i] *= factor;
    top = std::max(top, weights_[i]);
  }
  // Probabilities only see ratios; rescaling stops over/underflow on
  // long runs.
  for (double& w : weights_) w /= top;
}

// -- RegretMatching -------------------------------------------------------

RegretMatching::RegretMatching(int num_arms) : regrets_(num_arms, 0.0) {}

Vec RegretMatching::Probabilities() const {
  double positive = 0.0;
  for (double r : regrets_) positive += std::max(r, 0.0);
  Vec p(regrets_.size());
  if (positive > 0.0) {
    for (size_t i = 0; i < regrets_.size(); ++i) {
      p[i] = std::max(regrets_[i], 0.0) / positive;
    }
  } else {
    std::fill(p.begin(), p.end(), 1.0 / regrets_.size());
  }
  return p;
}

void RegretMatching::Observe(const Vec& rewards) {
  if (rewards.size() != regrets_.size()) {
    throw DimensionMismatch("RegretMatching: reward vector size");
  }
  const Vec p = Probabilities();
  const double played = Dot(p, rewards);
  for (size_t i = 0; i < regrets_.size(); ++i) {
    regrets_[i] += rewards[i] - played;
  }
}

// -- SwapRegretWrapper ------------------------------------------------------

SwapRegretWrapper::SwapRegretWrapper(int num_arms, MetaSolverKind sub_kind,
                                     double eta) {
  for (int i = 0; i < num_arms; ++i) {
    subs_.push_back(MakeMetaSolver(sub_kind, num_arms, eta));
  }
  last_played_.assign(num_arms, 1.0 / num_arms);
}

Vec SwapRegretWrapper::Probabilities() const {
  Mat matrix(subs_.size());
  for (size_t i = 0; i < subs_.size(); ++i) matrix[i] = subs_[i]->Probabilities();
  last_played_ = StationaryDistribution(matrix);
  return last_played_;
}

void SwapRegretWrapper::Observe(const Vec& rewards) {
  if (rewards.size() != subs_.size()) {
    throw DimensionMismatch("SwapRegretWrapper: reward vector size");
  }
  for (size_t i = 0; i < subs_.size(); ++i) {
    Vec scaled(rewards.size());
    for (size_t k = 0; k < rewards.size(); ++k) {
      scaled[k] = last_played_[i] * rewards[k];
    }
    subs_[i]->Observe(scaled);
  }
}

std::unique_ptr<MetaSolver> MakeMetaSolver(MetaSolverKind kind, int num_arms,
                                           double eta) {
  switch (kind) {
    case MetaSolverKind::kPolynomialWeights:
      return std::make_unique<PolynomialWeights>(num_arms, eta);
    case MetaSolverKind::kRegretMatching:
      return std::make_unique<RegretMatching>(num_arms);
    case MetaSolverKind::kSwapPW:
      return std::make_unique<SwapRegretWrapper>(
          num_arms, MetaSolverKind::kPolynomialWeights, eta);
    case MetaSolverKind::kSwapRM:
      return std::make_unique<SwapRegretWrapper>(
          num_arms, MetaSolverKind::kRegretMatching, eta);
  }
  throw Error("unreachable meta-solver kind");
}

Vec StationaryDistribution(const Mat& matrix) {
  const size_t n = matrix.size();
  auto iterate = [&](const Mat& m, Vec p, long long max_steps) -> std::optional<Vec> {
    for (long long step = 0; step < max_steps; ++step) {
      Vec next(n, 0.0);
      for (size_t i = 0; i < n; ++i) {
        if (p[i] == 0.0) continue;
        for (size_t j = 0; j < n; ++j) next[j] += p[i] * m[i][j];
      }
      double total = 0.0;
      for (double v : next) total += v;
      for (double& v : next) v /= total;
      if (LinfDistance(next, p) <= 1e-12) return next;
      p = std::move(next);
    }
    return std::nullopt;
  };

  Vec uniform(n, 1.0 / n);
  if (auto p = iterate(matrix, uniform, 100000)) return *p;
  // Degenerate (e.g. periodic) matrices: damp toward uniform.
  Mat damped = matrix;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      damped[i][j] = 0.99 * matrix[i][j] + 0.01 / n;
    }
  }
  if (auto p = iterate(damped, uniform, 100000)) return *p;
  throw Error("StationaryDistribution: power iteration failed to converge");
}

}  // namespace mfg
