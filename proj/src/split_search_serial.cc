/*
 * Copyright 2026 The CIET Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference for the feature sweep; tests compare it with the OpenMP
// version and the benchmark measures the speedup.

#include "ciet/split_search.h"

namespace ciet::serial {

std::optional<SplitCandidate> BestSplit(const Dataset& data,
                                        std::span<const std::size_t> rows,
                                        CriterionKind criterion,
                                        const SplitConstraints& constraints,
                                        const GroupCounts& reference) {
  std::optional<SplitCandidate> best;
  for (std::size_t f = 0; f < data.num_features(); ++f) {
    best = BetterOf(best, BestSplitForFeature(data, rows, f, criterion,
                                              constraints, reference));
  }
  return best;
}

}  // namespace ciet::serial
