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

#include "ciet/model_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ciet/error.h"
#include "json.hpp"

namespace ciet {
namespace {

using nlohmann::json;

std::string FormatDigits(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

double ParseDecimal(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ModelError("malformed number '" + s + "'");
  }
  return v;
}

json CountsToJson(const GroupCounts& c) {
  return {{"n_t", c.n_t}, {"n_c", c.n_c}, {"y_t", c.y_t}, {"y_c", c.y_c}};
}

GroupCounts CountsFromJson(const json& j) {
  GroupCounts c;
  c.n_t = j.at("n_t").get<std::int64_t>();
  c.n_c = j.at("n_c").get<std::int64_t>();
  c.y_t = j.at("y_t").get<std::int64_t>();
  c.y_c = j.at("y_c").get<std::int64_t>();
  if (!c.IsConsistent()) throw ModelError("inconsistent group counts");
  return c;
}

json ConstraintsToJson(const SplitConstraints& c) {
  return {{"min_samples", c.min_samples},   {"min_recall", c.min_recall},
          {"min_delta", c.min_delta},       {"max_bins", c.max_bins},
          {"strict_recall", c.strict_recall}};
}

SplitConstraints ConstraintsFromJson(const json& j) {
  SplitConstraints c;
  c.min_samples = j.at("min_samples").get<std::int64_t>();
  c.min_recall = j.at("min_recall").get<double>();
  c.min_delta = j.at("min_delta").get<double>();
  c.max_bins = j.at("max_bins").get<std::size_t>();
  c.strict_recall = j.at("strict_recall").get<bool>();
  return c;
}

json ThresholdToJson(double threshold) {
  return {{"threshold", FormatDigits(threshold, 12)},
          {"threshold_exact", FormatDigits(threshold, 17)}};
}

double ThresholdFromJson(const json& j) {
  if (j.contains("threshold_exact")) {
    return ParseDecimal(j.at("threshold_exact").get<std::string>());
  }
  return ParseDecimal(j.at("threshold").get<std::string>());
}

json RuleSetToJson(const RuleSetModel& m) {
  json config = {{"criterion", CriterionName(m.config.criterion)},
                 {"max_depth", m.config.max_depth},
                 {"cost", m.config.cost},
                 {"gain_reference", GainReferenceName(m.config.reference)},
                 {"rule_count", m.rule_count},
                 {"constraints", ConstraintsToJson(m.config.constraints)}};
  json rules = json::array();
  for (const Rule& r : m.rules) {
    json conditions = json::array();
    for (const Condition& c : r.conditions) {
      json jc = {{"feature", c.feature},
                 {"direction", DirectionSymbol(c.direction)}};
      jc.update(ThresholdToJson(c.threshold));
      conditions.push_back(std::move(jc));
    }
    rules.push_back({{"conditions", std::move(conditions)},
                     {"criterion", CriterionName(r.criterion)},
                     {"stats_before", CountsToJson(r.stats_before)},
                     {"stats_rule", CountsToJson(r.stats_rule)},
                     {"net_gain", r.net_gain},
                     {"recall_treatment", r.recall_treatment},
                     {"recall_control", r.recall_control},
                     {"step_gains", r.step_gains}});
  }
  return {{"config", std::move(config)},
          {"rules", std::move(rules)},
          {"default_uplift", m.default_uplift}};
}

RuleSetModel RuleSetFromJson(const json& j) {
  RuleSetModel m;
  const json& config = j.at("config");
  m.config.criterion =
      ParseCriterion(config.at("criterion").get<std::string>());
  m.config.max_depth = config.at("max_depth").get<int>();
  m.config.cost = config.at("cost").get<double>();
  m.config.reference =
      ParseGainReference(config.at("gain_reference").get<std::string>());
  m.config.constraints = ConstraintsFromJson(config.at("constraints"));
  m.rule_count = config.at("rule_count").get<int>();
  m.config.Validate();
  if (m.rule_count < 1) throw ModelError("rule_count must be >= 1");

  for (const json& jr : j.at("rules")) {
    Rule r;
    for (const json& jc : jr.at("conditions")) {
      Condition c;
      c.feature = jc.at("feature").get<std::string>();
      if (c.feature.empty()) throw ModelError("condition without a feature");
      c.direction = ParseDirection(jc.at("direction").get<std::string>());
      c.threshold = ThresholdFromJson(jc);
      r.conditions.push_back(std::move(c));
    }
    r.criterion = ParseCriterion(jr.at("criterion").get<std::string>());
    r.stats_before = CountsFromJson(jr.at("stats_before"));
    r.stats_rule = CountsFromJson(jr.at("stats_rule"));
    r.net_gain = jr.at("net_gain").get<double>();
    r.recall_treatment = jr.at("recall_treatment").get<double>();
    r.recall_control = jr.at("recall_control").get<double>();
    r.step_gains = jr.at("step_gains").get<std::vector<double>>();
    if (!r.stats_rule.WithinComponentwise(r.stats_before)) {
      throw ModelError("rule covers more rows than were available to it");
    }
    if (r.conditions.empty() ||
        static_cast<int>(r.conditions.size()) > m.config.max_depth) {
      throw ModelError("rule depth outside [1, max_depth]");
    }
    if (r.step_gains.size() != r.conditions.size()) {
      throw ModelError("step_gains and conditions differ in length");
    }
    for (double recall : {r.recall_treatment, r.recall_control}) {
      if (!(recall >= 0.0 && recall <= 1.0)) {
        throw ModelError("recall outside [0, 1]");
      }
    }
    m.rules.push_back(std::move(r));
  }
  if (static_cast<int>(m.rules.size()) > m.rule_count) {
    throw ModelError("more rules than rule_count");
  }
  m.default_uplift = j.at("default_uplift").get<double>();
  return m;
}

json TreeToJson(const BaselineTree& t) {
  json nodes = json::array();
  for (const BaselineNode& n : t.nodes) {
    json jn = {{"left", n.left},
               {"right", n.right},
               {"counts", CountsToJson(n.counts)},
               {"uplift", n.uplift}};
    if (!n.is_leaf()) {
      jn["feature"] = n.feature;
      jn.update(ThresholdToJson(n.threshold));
    }
    nodes.push_back(std::move(jn));
  }
  return {{"config",
           {{"divergence", CriterionName(t.divergence)},
            {"max_depth", t.max_depth},
            {"constraints", ConstraintsToJson(t.constraints)}}},
          {"nodes", std::move(nodes)}};
}

BaselineTree TreeFromJson(const json& j) {
  BaselineTree t;
  const json& config = j.at("config");
  t.divergence = ParseCriterion(config.at("divergence").get<std::string>());
  if (IsSingleBranch(t.divergence)) {
    throw ModelError("binary tree with a single-branch criterion");
  }
  t.max_depth = config.at("max_depth").get<int>();
  t.constraints = ConstraintsFromJson(config.at("constraints"));
  for (const json& jn : j.at("nodes")) {
    BaselineNode n;
    n.left = jn.at("left").get<std::int32_t>();
    n.right = jn.at("right").get<std::int32_t>();
    n.counts = CountsFromJson(jn.at("counts"));
    n.uplift = jn.at("uplift").get<double>();
    if (!n.is_leaf()) {
      n.feature = jn.at("feature").get<std::string>();
      n.threshold = ThresholdFromJson(jn);
    }
    t.nodes.push_back(std::move(n));
  }
  if (t.nodes.empty()) throw ModelError("tree without nodes");
  const auto size = static_cast<std::int32_t>(t.nodes.size());
  for (std::int32_t i = 0; i < size; ++i) {
    const BaselineNode& n = t.nodes[static_cast<std::size_t>(i)];
    if (n.is_leaf()) {
      if (n.right != -1) throw ModelError("leaf with a right child");
      continue;
    }
    if (n.left <= i || n.right <= i || n.left >= size || n.right >= size ||
        n.left == n.right) {
      throw ModelError("invalid child index");
    }
    const GroupCounts sum = t.nodes[static_cast<std::size_t>(n.left)].counts +
                            t.nodes[static_cast<std::size_t>(n.right)].counts;
    if (!(sum == n.counts)) {
      throw ModelError("children counts do not add up to their parent");
    }
  }
  return t;
}

json ParseJson(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace

std::string ExportModel(const ModelDocument& document) {
  json j = {{"format", "ciet-model"}, {"version", kModelFormatVersion}};
  if (const auto* rs = std::get_if<RuleSetModel>(&document.model)) {
    j["kind"] = "rule_set";
    j["model"] = RuleSetToJson(*rs);
  } else {
    j["kind"] = "binary_tree";
    j["model"] = TreeToJson(std::get<BaselineTree>(document.model));
  }
  j["preprocessing"] = {{"one_hot", document.one_hot},
                        {"kept_attributes", document.kept_attributes}};
  j["features"] = document.features;
  return j.dump(2) + "\n";
}

std::string ExportModel(const RuleSetModel& model) {
  return ExportModel(ModelDocument{model, false, {}, {}});
}

ModelDocument ImportModel(std::string_view text) {
  const json j = ParseJson(text);
  try {
    if (j.at("format").get<std::string>() != "ciet-model") {
      throw ModelError("not a ciet model document");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelError("unsupported model version " + std::to_string(version));
    }
    ModelDocument doc;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rule_set") {
      doc.model = RuleSetFromJson(j.at("model"));
    } else if (kind == "binary_tree") {
      doc.model = TreeFromJson(j.at("model"));
    } else {
      throw ModelError("unknown model kind '" + kind + "'");
    }
    const json& pre = j.at("preprocessing");
    doc.one_hot = pre.at("one_hot").get<bool>();
    doc.kept_attributes =
        pre.at("kept_attributes").get<std::vector<std::string>>();
    doc.features = j.at("features").get<std::vector<std::string>>();
    return doc;
  } catch (const json::exception& e) {
    throw ModelError(std::string("invalid model document: ") + e.what());
  } catch (const ParameterError& e) {
    throw ModelError(std::string("invalid model document: ") + e.what());
  }
}

RuleSetModel ImportRuleSet(std::string_view text) {
  ModelDocument doc = ImportModel(text);
  auto* rs = std::get_if<RuleSetModel>(&doc.model);
  if (!rs) throw ModelError("document holds a binary tree, not a rule set");
  return std::move(*rs);
}

void SaveModel(const ModelDocument& document, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << ExportModel(document);
  if (!out) throw Error("failed writing '" + path + "'");
}

ModelDocument LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read model '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ImportModel(ss.str());
}

}  // namespace ciet
