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

// Subcommands of the `ciet` tool: generate, train, eval, score, inspect.

#ifndef CIET_TOOLS_COMMANDS_H_
#define CIET_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "ciet/data.h"
#include "ciet/model_io.h"

namespace ciet::cli {

enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kDataError = 3,
  kSchemaOrModelError = 4,
};

// `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Applies the document's stored attribute selection and encoding to data
// loaded with the training ingestion settings.
Dataset PrepareForModel(const ModelDocument& document, const Dataset& raw);

// Predicted uplift of every row of `rows`, in order.
std::vector<double> ScoreWithModel(const ModelDocument& document,
                                   const Dataset& prepared,
                                   const RowSet& rows);

}  // namespace ciet::cli

#endif  // CIET_TOOLS_COMMANDS_H_
