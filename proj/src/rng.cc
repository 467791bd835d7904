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

#include "mfglab/rng.h"

#include <cmath>

namespace mfg {

uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t HashCombine(uint64_t seed, uint64_t index) {
  uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + (index << 6) + (index >> 2));
  SplitMix64(s);
  SplitMix64(s);
  return s;
}

double RandomStream::NextDouble() {
  return static_cast<double>(NextUint64() >> 11) * 0x1.0p-53;
}

int RandomStream::NextInt(int n) {
  return static_cast<int>(NextUint64() % static_cast<uint64_t>(n));
}

int SampleIndexFrom(const Vec& probs, double u) {
  double acc = 0.0;
  int last_positive = 0;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    if (probs[i] > 0.0) last_positive = i;
  }
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return last_positive;
}

Vec RandomStream::NextSimplex(int dim) {
  Vec v(dim);
  double total = 0.0;
  for (int i = 0; i < dim; ++i) {
    v[i] = -std::log(1.0 - NextDouble());
    total += v[i];
  }
  for (int i = 0; i < dim; ++i) v[i] /= total;
  return v;
}

}  // namespace mfg
