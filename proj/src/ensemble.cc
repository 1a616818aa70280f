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

#include "ciet/ensemble.h"

#include "ciet/error.h"

namespace ciet {

RuleSetModel LearnRuleSet(const Dataset& data, const TreeConfig& config,
                          int rule_count) {
  return LearnRuleSet(data, data.AllRows(), config, rule_count);
}

RuleSetModel LearnRuleSet(const Dataset& data,
                          std::span<const std::size_t> rows,
                          const TreeConfig& config, int rule_count) {
  if (rule_count < 1) throw ParameterError("rule_count must be >= 1");
  config.Validate();
  RuleSetModel model;
  model.config = config;
  model.rule_count = rule_count;

  RowSet pool(rows.begin(), rows.end());
  while (static_cast<int>(model.rules.size()) < rule_count) {
    auto rule = LearnRule(data, pool, config);
    if (!rule) break;
    const RuleMatcher matcher(*rule, data.schema());
    RowSet remaining;
    remaining.reserve(pool.size());
    for (std::size_t r : pool) {
      if (!matcher.Matches(data, r)) remaining.push_back(r);
    }
    pool = std::move(remaining);
    model.rules.push_back(std::move(*rule));
  }
  const GroupCounts residual = CountGroups(data, pool);
  model.default_uplift =
      residual.has_both_groups() ? UpliftRate(residual) : 0.0;
  return model;
}

RuleSetScorer::RuleSetScorer(const RuleSetModel& model,
                             const std::vector<FeatureSpec>& schema,
                             ScoringMode mode)
    : model_(&model), mode_(mode) {
  matchers_.reserve(model.rules.size());
  for (const Rule& rule : model.rules) matchers_.emplace_back(rule, schema);
}

RuleMatch RuleSetScorer::Score(std::span<const double> features) const {
  RuleMatch best{std::nullopt, model_->default_uplift};
  for (std::size_t i = 0; i < matchers_.size(); ++i) {
    if (!matchers_[i].Matches(features)) continue;
    const double uplift = model_->rules[i].uplift();
    if (mode_ == ScoringMode::kFirstMatch) return {i, uplift};
    if (!best.rule || uplift > best.uplift) best = {i, uplift};
  }
  return best;
}

RuleMatch RuleSetScorer::Score(const Dataset& data, std::size_t row) const {
  RuleMatch best{std::nullopt, model_->default_uplift};
  for (std::size_t i = 0; i < matchers_.size(); ++i) {
    if (!matchers_[i].Matches(data, row)) continue;
    const double uplift = model_->rules[i].uplift();
    if (mode_ == ScoringMode::kFirstMatch) return {i, uplift};
    if (!best.rule || uplift > best.uplift) best = {i, uplift};
  }
  return best;
}

double PredictUplift(const RuleSetModel& model,
                     const std::vector<FeatureSpec>& schema,
                     const Observation& observation, ScoringMode mode) {
  return RuleSetScorer(model, schema, mode).Score(observation.features).uplift;
}

std::vector<RuleMatch> ScoreRows(const RuleSetModel& model, const Dataset& data,
                                 std::span<const std::size_t> rows,
                                 ScoringMode mode) {
  const RuleSetScorer scorer(model, data.schema(), mode);
  std::vector<RuleMatch> out(rows.size());
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = scorer.Score(data, rows[k]);
  }
  return out;
}

namespace serial {

std::vector<RuleMatch> ScoreRows(const RuleSetModel& model, const Dataset& data,
                                 std::span<const std::size_t> rows,
                                 ScoringMode mode) {
  const RuleSetScorer scorer(model, data.schema(), mode);
  std::vector<RuleMatch> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(scorer.Score(data, r));
  return out;
}

}  // namespace serial

RowSet FirstMatchCover(const RuleSetModel& model, const Dataset& data,
                       std::span<const std::size_t> rows, std::size_t index) {
  const RuleSetScorer scorer(model, data.schema());
  RowSet out;
  for (std::size_t r : rows) {
    if (scorer.Score(data, r).rule == index) out.push_back(r);
  }
  return out;
}

}  // namespace ciet
