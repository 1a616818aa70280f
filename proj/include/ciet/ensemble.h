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

// Sequential covering over single-branch trees, and rule-set scoring.

#ifndef CIET_ENSEMBLE_H_
#define CIET_ENSEMBLE_H_

#include <optional>
#include <span>
#include <vector>

#include "ciet/data.h"
#include "ciet/tree.h"

namespace ciet {

struct RuleSetModel {
  std::vector<Rule> rules;
  // Uplift rate of the pool left after the last rule (0 if a group is empty).
  double default_uplift = 0.0;
  TreeConfig config;
  int rule_count = 3;

  bool operator==(const RuleSetModel&) const = default;
};

// Learns up to `rule_count` rules; each rule is learned on the rows not
// covered by any earlier rule. Stops early when no rule can be learned.
RuleSetModel LearnRuleSet(const Dataset& data, const TreeConfig& config,
                          int rule_count);
RuleSetModel LearnRuleSet(const Dataset& data,
                          std::span<const std::size_t> rows,
                          const TreeConfig& config, int rule_count);

enum class ScoringMode {
  // Uplift of the first covering rule in order.
  kFirstMatch,
  // Largest uplift among covering rules.
  kMaxUplift,
};

struct RuleMatch {
  // Index into RuleSetModel::rules, nullopt for the default.
  std::optional<std::size_t> rule;
  double uplift = 0.0;
};

class RuleSetScorer {
 public:
  // Throws SchemaError when a rule references a feature absent from `schema`.
  RuleSetScorer(const RuleSetModel& model,
                const std::vector<FeatureSpec>& schema,
                ScoringMode mode = ScoringMode::kFirstMatch);

  RuleMatch Score(std::span<const double> features) const;
  RuleMatch Score(const Dataset& data, std::size_t row) const;

 private:
  const RuleSetModel* model_;
  std::vector<RuleMatcher> matchers_;
  ScoringMode mode_;
};

double PredictUplift(const RuleSetModel& model,
                     const std::vector<FeatureSpec>& schema,
                     const Observation& observation,
                     ScoringMode mode = ScoringMode::kFirstMatch);

// Scores `rows` in parallel.
std::vector<RuleMatch> ScoreRows(const RuleSetModel& model, const Dataset& data,
                                 std::span<const std::size_t> rows,
                                 ScoringMode mode = ScoringMode::kFirstMatch);

namespace serial {

std::vector<RuleMatch> ScoreRows(const RuleSetModel& model, const Dataset& data,
                                 std::span<const std::size_t> rows,
                                 ScoringMode mode = ScoringMode::kFirstMatch);

}  // namespace serial

// Rows of `rows` covered by rule `index` that no earlier rule covers.
RowSet FirstMatchCover(const RuleSetModel& model, const Dataset& data,
                       std::span<const std::size_t> rows, std::size_t index);

}  // namespace ciet

#endif  // CIET_ENSEMBLE_H_
