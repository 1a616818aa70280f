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

// Text and plot renderings of models and evaluations.

#ifndef CIET_REPORT_H_
#define CIET_REPORT_H_

#include <iosfwd>
#include <span>
#include <string>

#include "ciet/baseline_tree.h"
#include "ciet/ensemble.h"
#include "ciet/metrics.h"

namespace ciet {

// One column per rule: node logic lines, N_before and N_rule by group, net
// gain and responder recalls.
std::string RenderRuleTable(const RuleSetModel& model);

// Indented listing of splits with per-leaf counts and uplift.
std::string RenderTree(const BaselineTree& tree);

// Columns t, fraction, f, g, random_f, optimal_g.
void WriteCurveCsv(const UpliftEvaluation& eval, std::ostream& out);

struct NamedEvaluation {
  std::string name;
  const UpliftEvaluation* eval = nullptr;
};

// Uplift curves against the population fraction, plus the random diagonal
// of the first entry drawn dashed.
std::string RenderUpliftSvg(std::span<const NamedEvaluation> curves,
                            const std::string& title = "Uplift curves");

}  // namespace ciet

#endif  // CIET_REPORT_H_
