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

// Single-branch tree induction. Each accepted split keeps one branch and
// censors the other; the path of kept branches is one conjunctive rule.

#ifndef CIET_TREE_H_
#define CIET_TREE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ciet/criteria.h"
#include "ciet/data.h"
#include "ciet/split_search.h"

namespace ciet {

// Which distribution supplies P_0 when scoring a candidate split.
enum class GainReference {
  // The node currently being split.
  kParent,
  // The rows the tree started from.
  kRoot,
};

std::string_view GainReferenceName(GainReference reference);
GainReference ParseGainReference(std::string_view name);

struct TreeConfig {
  CriterionKind criterion = CriterionKind::kLG;
  int max_depth = 3;
  // A split is accepted only if its gain exceeds the previous one by more
  // than this.
  double cost = 0.01;
  SplitConstraints constraints;
  GainReference reference = GainReference::kParent;

  // Throws ParameterError.
  void Validate() const;
  bool operator==(const TreeConfig&) const = default;
};

struct Condition {
  std::string feature;
  Direction direction = Direction::kLessEqual;
  double threshold = 0.0;

  // Missing values never satisfy a condition.
  bool Holds(double value) const {
    if (IsMissing(value)) return false;
    return direction == Direction::kLessEqual ? value <= threshold
                                              : value > threshold;
  }
  bool operator==(const Condition&) const = default;
};

struct Rule {
  // In acceptance order.
  std::vector<Condition> conditions;
  GroupCounts stats_before;
  GroupCounts stats_rule;
  // LG of the covered set against stats_before.
  double net_gain = 0.0;
  double recall_treatment = 0.0;
  double recall_control = 0.0;
  CriterionKind criterion = CriterionKind::kLG;
  // Gain of each accepted split, same length as `conditions`.
  std::vector<double> step_gains;

  // P_R^T - P_R^C on the training cover; 0 when a group is absent.
  double uplift() const;
  bool operator==(const Rule&) const = default;
};

// A rule bound to a concrete schema.
class RuleMatcher {
 public:
  // Throws SchemaError when a condition names an unknown feature.
  RuleMatcher(const Rule& rule, const std::vector<FeatureSpec>& schema);

  bool Matches(std::span<const double> features) const;
  bool Matches(const Dataset& data, std::size_t row) const;

 private:
  struct Bound {
    std::size_t feature;
    Condition condition;
  };
  std::vector<Bound> bound_;
};

// Rows of `rows` that satisfy every condition, in input order.
RowSet CoveredRows(const Rule& rule, const Dataset& data,
                   std::span<const std::size_t> rows);

bool Covers(const Rule& rule, const std::vector<FeatureSpec>& schema,
            const Observation& observation);

// Fills stats_before, stats_rule, net_gain and both recalls from `rows`.
Rule RuleStatistics(Rule rule, const Dataset& data,
                    std::span<const std::size_t> rows);

// Learns one rule on `rows`. Returns nullopt when no split is ever accepted.
std::optional<Rule> LearnRule(const Dataset& data,
                              std::span<const std::size_t> rows,
                              const TreeConfig& config);

// "IF f1 ≤ v1 AND f2 > v2 THEN uplift = <rate>, net_gain = <g>"
std::string RenderRule(const Rule& rule);

}  // namespace ciet

#endif  // CIET_TREE_H_
