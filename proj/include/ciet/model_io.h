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

// Versioned JSON documents for trained models.
//
// Thresholds are written as decimal strings with 12 significant digits
// ("threshold") next to the exact value ("threshold_exact", 17 digits);
// import prefers the exact value so a round trip is lossless.

#ifndef CIET_MODEL_IO_H_
#define CIET_MODEL_IO_H_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ciet/baseline_tree.h"
#include "ciet/ensemble.h"

namespace ciet {

inline constexpr int kModelFormatVersion = 1;

using StoredModel = std::variant<RuleSetModel, BaselineTree>;

struct ModelDocument {
  StoredModel model;
  // Training data was one-hot encoded before fitting.
  bool one_hot = false;
  // Input attributes kept by the distribution filter; empty when unfiltered.
  std::vector<std::string> kept_attributes;
  // Feature names of the training schema.
  std::vector<std::string> features;

  bool operator==(const ModelDocument&) const = default;
};

std::string ExportModel(const ModelDocument& document);
std::string ExportModel(const RuleSetModel& model);

// Throws ModelError on malformed input, an unknown version, or counts that
// violate the model invariants.
ModelDocument ImportModel(std::string_view text);
RuleSetModel ImportRuleSet(std::string_view text);

void SaveModel(const ModelDocument& document, const std::string& path);
ModelDocument LoadModel(const std::string& path);

}  // namespace ciet

#endif  // CIET_MODEL_IO_H_
