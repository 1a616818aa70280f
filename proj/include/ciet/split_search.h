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

// Best single-branch split for one feature, and the sweep over all features.
//
// For every candidate threshold v the kept branch is either {x <= v} or
// {x > v}; its gain is scored with LG or LGR against a reference
// distribution. Candidates violating the constraints are dropped. Ties go to
// the smaller threshold, and between equal left/right maxima to "<=".
// Rows whose value is missing are never kept by a split on that feature.

#ifndef CIET_SPLIT_SEARCH_H_
#define CIET_SPLIT_SEARCH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ciet/criteria.h"
#include "ciet/data.h"

namespace ciet {

enum class Direction : std::uint8_t { kLessEqual, kGreater };

// "<=" or ">".
std::string_view DirectionSymbol(Direction d);
// Accepts "<=", "≤", "le", ">", "gt". Throws ParameterError.
Direction ParseDirection(std::string_view s);

struct SplitConstraints {
  // Kept branch row count (treatment + control).
  std::int64_t min_samples = 50;
  // Treatment-group responder recall of the kept branch.
  double min_recall = 0.1;
  double min_delta = 0.0;
  std::size_t max_bins = 256;
  // Apply min_recall to the control group as well.
  bool strict_recall = false;

  // Throws ParameterError.
  void Validate() const;
  bool operator==(const SplitConstraints&) const = default;
};

struct SplitCandidate {
  std::size_t feature = 0;
  std::string feature_name;
  Direction direction = Direction::kLessEqual;
  double threshold = 0.0;
  double gain = 0.0;
  GroupCounts kept;
  GroupCounts censored;
};

// Per-bin group counts of one feature over a row subset. Bin k holds values
// in (edges[k-1], edges[k]]; the last bin is unbounded above.
struct FeatureHistogram {
  std::vector<double> edges;
  std::vector<GroupCounts> bins;
  GroupCounts missing;
};

// Midpoints of adjacent values when there are at most max_bins distinct
// values, otherwise max_bins - 1 midpoints at quantiles of the distinct
// values. Empty for fewer than two values.
std::vector<double> CandidateThresholds(std::span<const double> sorted_distinct,
                                        std::size_t max_bins);

FeatureHistogram BuildFeatureHistogram(const Dataset& data,
                                       std::span<const std::size_t> rows,
                                       std::size_t feature,
                                       std::size_t max_bins);

// y_child / y_parent for one group; nullopt when the parent has no
// responders in that group.
std::optional<double> RecallOf(const GroupCounts& child,
                               const GroupCounts& parent, Group group);

// `node` is the set being split (recall denominator).
bool SatisfiesConstraints(const GroupCounts& kept, const GroupCounts& node,
                          double gain, const SplitConstraints& constraints);

// `reference` supplies P_0 for the criterion. Returns nullopt when the rows
// lack a group, the feature is constant, every candidate is suppressed, or
// (LGR only) the reference uplift is not positive.
std::optional<SplitCandidate> BestSplitForFeature(
    const Dataset& data, std::span<const std::size_t> rows,
    std::size_t feature, CriterionKind criterion,
    const SplitConstraints& constraints, const GroupCounts& reference);

// Same, with the rows themselves as the reference.
std::optional<SplitCandidate> BestSplitForFeature(
    const Dataset& data, std::span<const std::size_t> rows,
    std::size_t feature, CriterionKind criterion,
    const SplitConstraints& constraints);

// Evaluates every feature in parallel and keeps the highest gain; equal gains
// resolve to the earlier feature in schema order.
std::optional<SplitCandidate> BestSplit(const Dataset& data,
                                        std::span<const std::size_t> rows,
                                        CriterionKind criterion,
                                        const SplitConstraints& constraints,
                                        const GroupCounts& reference);

namespace serial {

// Single-threaded reference for ciet::BestSplit.
std::optional<SplitCandidate> BestSplit(const Dataset& data,
                                        std::span<const std::size_t> rows,
                                        CriterionKind criterion,
                                        const SplitConstraints& constraints,
                                        const GroupCounts& reference);

}  // namespace serial

// Keeps `b` over `a` only when its gain is strictly larger.
const std::optional<SplitCandidate>& BetterOf(
    const std::optional<SplitCandidate>& a,
    const std::optional<SplitCandidate>& b);

}  // namespace ciet

#endif  // CIET_SPLIT_SEARCH_H_
