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

// Splitting criteria. LG and LGR score the single branch kept by a split
// against a reference distribution; KL and ED are the binary-tree divergences
// used by the baseline trees through ConditionalGain.

#ifndef CIET_CRITERIA_H_
#define CIET_CRITERIA_H_

#include <string_view>

#include "ciet/data.h"

namespace ciet {

enum class CriterionKind { kLG, kLGR, kKL, kED };

std::string_view CriterionName(CriterionKind kind);
// Accepts "LG", "LGR", "KL", "ED" (any case). Throws ParameterError.
CriterionKind ParseCriterion(std::string_view name);

inline bool IsSingleBranch(CriterionKind kind) {
  return kind == CriterionKind::kLG || kind == CriterionKind::kLGR;
}

// `parent` supplies P_0 (the reference distribution), `child` the rows
// satisfying the branch logic R.
struct SplitContext {
  GroupCounts parent;
  GroupCounts child;
};

// (P_R^T - P_R^C) N_R - (P_0^T - P_0^C) N_R. Throws UndefinedRateError.
double LiftGain(const SplitContext& ctx);

// (P_R^T - P_R^C) / (P_0^T - P_0^C). Throws UndefinedRateError, or
// DegenerateDenominatorError when the parent uplift is exactly zero.
double LiftGainRatio(const SplitContext& ctx);

// LiftGain or LiftGainRatio depending on `kind` (must be single-branch).
double SingleBranchGain(CriterionKind kind, const SplitContext& ctx);

// Bernoulli KL divergence, natural log, 0 log 0 = 0. p_c is clamped to
// [1e-9, 1 - 1e-9] when p_t sits on the open side of a boundary.
double KlDivergence(double p_t, double p_c);

// (p_t - p_c)^2 + ((1 - p_t) - (1 - p_c))^2.
double EuclidDivergence(double p_t, double p_c);

// KL or ED depending on `kind`.
double Divergence(CriterionKind kind, double p_t, double p_c);

// sum_k w_k D(p_k^T, p_k^C) - D(p^T, p^C) with w_k = N_k / N.
// Requires left + right == parent; throws IneligibleSplitError when a side
// lacks either group.
double ConditionalGain(CriterionKind divergence, const GroupCounts& parent,
                       const GroupCounts& left, const GroupCounts& right);

}  // namespace ciet

#endif  // CIET_CRITERIA_H_
