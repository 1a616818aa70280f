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

// Synthetic randomized trials with known feature roles.
//
// Every feature is standard normal. Rows get a base logit from a random
// linear combination of the informative features; treated rows add a
// nonnegative term u = sum_j w_j sigmoid(4 (s_j x_j - 1)) driven by the
// uplift features, so the effect concentrates where an uplift feature lies
// past +-1 on its random side s_j. Outcomes are
//   y = 1[eta + lambda * u + e > c],   e ~ Logistic(0, 1)
// with c set so the control rate hits base_response and lambda >= 0 set by
// bisection so the treated rate hits base_response + treatment_lift.
//
// Columns are named x{i}_{role} with role in informative, irrelevant,
// uplift, mix, numbered from 1 in that order.

#ifndef CIET_SYNTHGEN_H_
#define CIET_SYNTHGEN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ciet/data.h"

namespace ciet {

struct SynthSpec {
  std::int64_t n_treatment = 3000;
  std::int64_t n_control = 3000;
  int n_informative = 6;
  int n_irrelevant = 2;
  int n_uplift = 2;
  int n_mix = 1;
  double base_response = 0.5;
  double treatment_lift = 0.1;
  std::uint64_t seed = 0;

  // Throws ParameterError for empty groups, rates outside [0, 1], a
  // negative lift, or a positive lift without uplift features.
  void Validate() const;

  static SynthSpec Preset(std::uint64_t seed = 0);
};

// Treated and control rows are interleaved in random order. Throws
// ParameterError when the targets cannot be met.
Dataset Generate(const SynthSpec& spec);

// One dataset per seed, generated in parallel.
std::vector<Dataset> GenerateSeeds(const SynthSpec& spec,
                                   std::span<const std::uint64_t> seeds);

}  // namespace ciet

#endif  // CIET_SYNTHGEN_H_
