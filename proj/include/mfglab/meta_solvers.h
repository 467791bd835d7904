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

#ifndef MFGLAB_META_SOLVERS_H_
#define MFGLAB_META_SOLVERS_H_

#include <memory>
#include <string>
#include <vector>

#include "mfglab/core.h"

// Adversarial no-regret meta-solvers for the PSRO inner loop: Polynomial
// Weights, Regret Matching, and a swap-regret wrapper that runs one
// external-regret sub-solver per arm and plays the stationary
// distribution of their probability matrix.

namespace mfg {

enum class MetaSolverKind { kPolynomialWeights, kRegretMatching, kSwapPW, kSwapRM };

MetaSolverKind ParseMetaSolverKind(const std::string& name);  // pw|rm|swap-pw|swap-rm
bool MinimizesSwapRegret(MetaSolverKind kind);

class MetaSolver {
 public:
  virtual ~MetaSolver() = default;
  virtual int num_arms() const = 0;
  // Current mixed strategy; sums to one.
  virtual Vec Probabilities() const = 0;
  // Feed the observed reward vector (one entry per arm).
  virtual void Observe(const Vec& rewards) = 0;
};

// Multiplicative update w_i *= 1 + eta * r_i. Weights start at one; the
// printed w_0 = 0 initialization would freeze the algorithm, so the
// corrected value is used. Requires eta * |r| < 1 to keep weights
// positive.
class PolynomialWeights : public MetaSolver {
 public:
  PolynomialWeights(int num_arms, double eta);
  int num_arms() const override { return static_cast<int>(weights_.size()); }
  Vec Probabilities() const override;
  void Observe(const Vec& rewards) override;

 private:
  Vec weights_;
  double eta_;
};

// Play positive parts of cumulative regrets, uniform when none are
// positive.
class RegretMatching : public MetaSolver {
 public:
  explicit RegretMatching(int num_arms);
  int num_arms() const override { return static_cast<int>(regrets_.size()); }
  Vec Probabilities() const override;
  void Observe(const Vec& rewards) override;

 private:
  Vec regrets_;
};

// Blum-Mansour reduction from external to swap regret. Sub-solver i is
// fed the observed rewards scaled by the probability of playing arm i.
class SwapRegretWrapper : public MetaSolver {
 public:
  SwapRegretWrapper(int num_arms, MetaSolverKind sub_kind, double eta);
  int num_arms() const override { return static_cast<int>(subs_.size()); }
  Vec Probabilities() const override;
  void Observe(const Vec& rewards) override;

 private:
  std::vector<std::unique_ptr<MetaSolver>> subs_;
  mutable Vec last_played_;
};

std::unique_ptr<MetaSolver> MakeMetaSolver(MetaSolverKind kind, int num_arms,
                                           double eta);

// Stationary distribution of a row-stochastic matrix by power iteration
// to 1e-12; a non-converging matrix is retried with damping 0.99.
Vec StationaryDistribution(const Mat& matrix);

}  // namespace mfg

#endif  // MFGLAB_META_SOLVERS_H_
