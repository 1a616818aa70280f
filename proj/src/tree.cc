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

#include "ciet/tree.h"

#include <cmath>
#include <cstdio>
#include <string>

#include "ciet/error.h"

namespace ciet {
namespace {

std::string FormatValue(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

std::string_view GainReferenceName(GainReference reference) {
  return reference == GainReference::kParent ? "parent" : "root";
}

GainReference ParseGainReference(std::string_view name) {
  if (name == "parent") return GainReference::kParent;
  if (name == "root") return GainReference::kRoot;
  throw ParameterError("gain reference must be 'parent' or 'root'");
}

void TreeConfig::Validate() const {
  if (!IsSingleBranch(criterion)) {
    throw ParameterError("single-branch trees use LG or LGR");
  }
  if (max_depth < 1) throw ParameterError("max_depth must be >= 1");
  if (!std::isfinite(cost)) throw ParameterError("cost must be finite");
  constraints.Validate();
}

double Rule::uplift() const {
  return stats_rule.has_both_groups() ? UpliftRate(stats_rule) : 0.0;
}

RuleMatcher::RuleMatcher(const Rule& rule,
                         const std::vector<FeatureSpec>& schema) {
  for (const Condition& c : rule.conditions) {
    std::size_t index = schema.size();
    for (std::size_t f = 0; f < schema.size(); ++f) {
      if (schema[f].name == c.feature) {
        index = f;
        break;
      }
    }
    if (index == schema.size()) {
      throw SchemaError("rule references unknown feature '" + c.feature + "'");
    }
    bound_.push_back({index, c});
  }
}

bool RuleMatcher::Matches(std::span<const double> features) const {
  for (const Bound& b : bound_) {
    if (!b.condition.Holds(features[b.feature])) return false;
  }
  return true;
}

bool RuleMatcher::Matches(const Dataset& data, std::size_t row) const {
  for (const Bound& b : bound_) {
    if (!b.condition.Holds(data.value(row, b.feature))) return false;
  }
  return true;
}

RowSet CoveredRows(const Rule& rule, const Dataset& data,
                   std::span<const std::size_t> rows) {
  const RuleMatcher matcher(rule, data.schema());
  RowSet covered;
  for (std::size_t r : rows) {
    if (matcher.Matches(data, r)) covered.push_back(r);
  }
  return covered;
}

bool Covers(const Rule& rule, const std::vector<FeatureSpec>& schema,
            const Observation& observation) {
  return RuleMatcher(rule, schema).Matches(observation.features);
}

Rule RuleStatistics(Rule rule, const Dataset& data,
                    std::span<const std::size_t> rows) {
  rule.stats_before = CountGroups(data, rows);
  rule.stats_rule = CountGroups(data, CoveredRows(rule, data, rows));
  rule.net_gain = 0.0;
  if (rule.stats_rule.has_both_groups() &&
      rule.stats_before.has_both_groups()) {
    rule.net_gain = LiftGain({rule.stats_before, rule.stats_rule});
  }
  rule.recall_treatment =
      RecallOf(rule.stats_rule, rule.stats_before, Group::kTreatment)
          .value_or(0.0);
  rule.recall_control =
      RecallOf(rule.stats_rule, rule.stats_before, Group::kControl)
          .value_or(0.0);
  return rule;
}

std::optional<Rule> LearnRule(const Dataset& data,
                              std::span<const std::size_t> rows,
                              const TreeConfig& config) {
  config.Validate();
  const GroupCounts root = CountGroups(data, rows);
  Rule rule;
  rule.criterion = config.criterion;
  RowSet node(rows.begin(), rows.end());
  double max_gain = 0.0;

  for (int depth = 0; depth < config.max_depth; ++depth) {
    const GroupCounts node_counts = CountGroups(data, node);
    if (!node_counts.has_both_groups()) break;
    const GroupCounts& reference =
        config.reference == GainReference::kRoot ? root : node_counts;
    const auto best = BestSplit(data, node, config.criterion,
                                config.constraints, reference);
    if (!best || !(best->gain > max_gain + config.cost)) break;

    max_gain = best->gain;
    const Condition condition{best->feature_name, best->direction,
                              best->threshold};
    rule.conditions.push_back(condition);
    rule.step_gains.push_back(best->gain);

    // Continue on the kept branch; the rest is censored for this tree.
    const auto column = data.column(best->feature);
    RowSet kept;
    kept.reserve(static_cast<std::size_t>(best->kept.total()));
    for (std::size_t r : node) {
      if (condition.Holds(column[r])) kept.push_back(r);
    }
    node = std::move(kept);
  }
  if (rule.conditions.empty()) return std::nullopt;
  return RuleStatistics(std::move(rule), data, rows);
}

std::string RenderRule(const Rule& rule) {
  std::string out = "IF ";
  if (rule.conditions.empty()) out += "TRUE";
  for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
    const Condition& c = rule.conditions[i];
    if (i > 0) out += " AND ";
    out += c.feature;
    out += c.direction == Direction::kLessEqual ? " ≤ " : " > ";
    out += FormatValue(c.threshold, "%.6g");
  }
  out += " THEN uplift = " + FormatValue(rule.uplift(), "%.4f");
  out += ", net_gain = " + FormatValue(rule.net_gain, "%.2f");
  return out;
}

}  // namespace ciet
