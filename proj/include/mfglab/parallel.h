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

#ifndef MFGLAB_PARALLEL_H_
#define MFGLAB_PARALLEL_H_

#include <functional>

namespace mfg {

// Thread cap: MFGLAB_THREADS when set (>= 1), hardware concurrency
// otherwise.
int MaxThreads();

// Runs fn(0..n-1) across up to MaxThreads() threads. Workers only write
// to disjoint indices; callers reduce in index order, so parallel and
// serial runs produce identical results.
void ParallelFor(int n, const std::function<void(int)>& fn);

}  // namespace mfg

#endif  // MFGLAB_PARALLEL_H_
