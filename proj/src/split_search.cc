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

#include "ciet/split_search.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "ciet/error.h"

namespace ciet {

std::string_view DirectionSymbol(Direction d) {
  return d == Direction::kLessEqual ? "<=" : ">";
}

Direction ParseDirection(std::string_view s) {
  if (s == "<=" || s == "≤" || s == "le" || s == "LE") {
    return Direction::kLessEqual;
  }
  if (s == ">" || s == "gt" || s == "GT") return Direction::kGreater;
  throw ParameterError("unknown split direction '" + std::string(s) + "'");
}

void SplitConstraints::Validate() const {
  if (min_samples < 1) throw ParameterError("min_samples must be >= 1");
  if (!(min_recall >= 0.0 && min_recall <= 1.0)) {
    throw ParameterError("min_recall must lie in [0, 1]");
  }
  if (!std::isfinite(min_delta)) throw ParameterError("min_delta not finite");
  if (max_bins < 2) throw ParameterError("max_bins must be >= 2");
}

std::vector<double> CandidateThresholds(std::span<const double> sorted_distinct,
                                        std::size_t max_bins) {
  std::vector<double> thresholds;
  const std::size_t n = sorted_distinct.size();
  if (n < 2) return thresholds;
  auto midpoint = [&](std::size_t upper) {
    return sorted_distinct[upper - 1] +
           (sorted_distinct[upper] - sorted_distinct[upper - 1]) / 2.0;
  };
  if (n <= max_bins) {
    thresholds.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) thresholds.push_back(midpoint(i));
    return thresholds;
  }
  // n > max_bins keeps the quantile indices strictly increasing.
  thresholds.reserve(max_bins - 1);
  for (std::size_t k = 1; k < max_bins; ++k) {
    thresholds.push_back(midpoint(k * n / max_bins));
  }
  return thresholds;
}

FeatureHistogram BuildFeatureHistogram(const Dataset& data,
                                       std::span<const std::size_t> rows,
                                       std::size_t feature,
                                       std::size_t max_bins) {
  FeatureHistogram hist;
  const auto column = data.column(feature);
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t r : rows) {
    const double v = column[r];
    if (IsMissing(v)) {
      hist.missing.Add(data.group(r), data.outcome(r));
    } else {
      values.push_back(v);
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  hist.edges = CandidateThresholds(values, max_bins);
  hist.bins.assign(hist.edges.size() + 1, GroupCounts{});
  for (std::size_t r : rows) {
    const double v = column[r];
    if (IsMissing(v)) continue;
    const auto bin = static_cast<std::size_t>(
        std::lower_bound(hist.edges.begin(), hist.edges.end(), v) -
        hist.edges.begin());
    hist.bins[bin].Add(data.group(r), data.outcome(r));
  }
  return hist;
}

std::optional<double> RecallOf(const GroupCounts& child,
                               const GroupCounts& parent, Group group) {
  const std::int64_t y_parent =
      group == Group::kTreatment ? parent.y_t : parent.y_c;
  const std::int64_t y_child =
      group == Group::kTreatment ? child.y_t : child.y_c;
  if (y_parent <= 0) return std::nullopt;
  return static_cast<double>(y_child) / static_cast<double>(y_parent);
}

bool SatisfiesConstraints(const GroupCounts& kept, const GroupCounts& node,
                          double gain, const SplitConstraints& constraints) {
  if (kept.total() < constraints.min_samples) return false;
  const auto recall_t = RecallOf(kept, node, Group::kTreatment);
  if (!recall_t || *recall_t < constraints.min_recall) return false;
  if (constraints.strict_recall) {
    const auto recall_c = RecallOf(kept, node, Group::kControl);
    if (!recall_c || *recall_c < constraints.min_recall) return false;
  }
  return gain >= constraints.min_delta;
}

std::optional<SplitCandidate> BestSplitForFeature(
    const Dataset& data, std::span<const std::size_t> rows,
    std::size_t feature, CriterionKind criterion,
    const SplitConstraints& constraints, const GroupCounts& reference) {
  if (!IsSingleBranch(criterion)) {
    throw ParameterError("single-branch search needs LG or LGR");
  }
  const GroupCounts node = CountGroups(data, rows);
  if (!node.has_both_groups() || !reference.has_both_groups()) {
    return std::nullopt;
  }
  // A non-positive reference uplift flips the meaning of the ratio.
  if (criterion == CriterionKind::kLGR && UpliftRate(reference) <= 0.0) {
    return std::nullopt;
  }

  const FeatureHistogram hist =
      BuildFeatureHistogram(data, rows, feature, constraints.max_bins);
  if (hist.edges.empty()) return std::nullopt;
  const GroupCounts observed = node - hist.missing;

  std::optional<SplitCandidate> best_left, best_right;
  auto consider = [&](const GroupCounts& kept, Direction dir, double threshold,
                      std::optional<SplitCandidate>& best) {
    if (!kept.has_both_groups()) return;
    const double gain = SingleBranchGain(criterion, {reference, kept});
    if (!SatisfiesConstraints(kept, node, gain, constraints)) return;
    if (best && !(gain > best->gain)) return;
    best = SplitCandidate{feature, data.feature(feature).name, dir, threshold,
                          gain,    kept,  node - kept};
  };

  GroupCounts prefix;
  for (std::size_t k = 0; k < hist.edges.size(); ++k) {
    prefix += hist.bins[k];
    consider(prefix, Direction::kLessEqual, hist.edges[k], best_left);
    consider(observed - prefix, Direction::kGreater, hist.edges[k],
             best_right);
  }
  if (!best_left) return best_right;
  if (!best_right) return best_left;
  return best_left->gain >= best_right->gain ? best_left : best_right;
}

std::optional<SplitCandidate> BestSplitForFeature(
    const Dataset& data, std::span<const std::size_t> rows,
    std::size_t feature, CriterionKind criterion,
    const SplitConstraints& constraints) {
  return BestSplitForFeature(data, rows, feature, criterion, constraints,
                             CountGroups(data, rows));
}

const std::optional<SplitCandidate>& BetterOf(
    const std::optional<SplitCandidate>& a,
    const std::optional<SplitCandidate>& b) {
  if (!b) return a;
  if (!a) return b;
  return b->gain > a->gain ? b : a;
}

std::optional<SplitCandidate> BestSplit(const Dataset& data,
                                        std::span<const std::size_t> rows,
                                        CriterionKind criterion,
                                        const SplitConstraints& constraints,
                                        const GroupCounts& reference) {
  const auto n_features = static_cast<std::ptrdiff_t>(data.num_features());
  std::vector<std::optional<SplitCandidate>> per_feature(data.num_features());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t f = 0; f < n_features; ++f) {
    try {
      per_feature[static_cast<std::size_t>(f)] =
          BestSplitForFeature(data, rows, static_cast<std::size_t>(f),
                              criterion, constraints, reference);
    } catch (...) {
#pragma omp critical(ciet_split_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction in schema order keeps the result independent of scheduling.
  std::optional<SplitCandidate> best;
  for (const auto& candidate : per_feature) best = BetterOf(best, candidate);
  return best;
}

}  // namespace ciet
