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

#ifndef MFGLAB_RNG_H_
#define MFGLAB_RNG_H_

#include <cstdint>

#include "mfglab/core.h"

// Seeded counter-based random streams. Substreams are derived by hashing
// (seed, index), so parallel consumers draw identical values regardless
// of scheduling. Reproducible within this implementation only; no
// cross-language bit-exactness is promised.

namespace mfg {

uint64_t SplitMix64(uint64_t& state);

// Stable 64-bit mix of a seed and a stream index.
uint64_t HashCombine(uint64_t seed, uint64_t index);

// Index sampled from a probability vector by inverse CDF; the last
// positive entry absorbs rounding slack.
int SampleIndexFrom(const Vec& probs, double u);

class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : state_(seed) {}
  RandomStream(uint64_t seed, uint64_t index)
      : state_(HashCombine(seed, index)) {}

  RandomStream Substream(uint64_t index) const {
    return RandomStream(state_, index);
  }

  uint64_t NextUint64() { return SplitMix64(state_); }
  // Uniform in [0, 1).
  double NextDouble();
  // Uniform in {0, ..., n-1}.
  int NextInt(int n);
  int SampleIndex(const Vec& probs) { return SampleIndexFrom(probs, NextDouble()); }
  // Random point of the simplex over `dim` entries (flat Dirichlet).
  Vec NextSimplex(int dim);

 private:
  uint64_t state_;
};

}  // namespace mfg

#endif  // MFGLAB_RNG_H_
