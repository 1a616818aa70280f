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

#include "commands.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "ciet/baseline_tree.h"
#include "ciet/ensemble.h"
#include "ciet/error.h"
#include "ciet/metrics.h"
#include "ciet/report.h"
#include "ciet/synthgen.h"

namespace ciet::cli {
namespace {

struct IngestFlags {
  std::string delimiter = ",";
  std::string group_column = "group";
  std::vector<std::string> treatment_values = {"treatment"};
  std::vector<std::string> control_values = {"control"};
  std::string outcome_column = "outcome";
  std::vector<std::string> positive_values = {"1"};
  std::vector<std::string> negative_values = {"0"};
  std::vector<std::string> missing_tokens = {"", "?", "NA"};
  std::vector<std::string> column_names;
  bool keep_group_feature = false;

  void Register(CLI::App* app) {
    app->add_option("--delimiter", delimiter, "Field separator")
        ->capture_default_str();
    app->add_option("--group-column", group_column)->capture_default_str();
    app->add_option("--treatment-values", treatment_values,
                    "Cells meaning treatment; '*' matches anything else")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--control-values", control_values)
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--outcome-column", outcome_column)->capture_default_str();
    app->add_option("--positive-values", positive_values)
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--negative-values", negative_values)
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--missing-tokens", missing_tokens)->delimiter(',');
    app->add_option("--column-names", column_names,
                    "Names for a file without a header row")
        ->delimiter(',');
    app->add_flag("--keep-group-feature", keep_group_feature,
                  "Also use the group column as an input attribute");
  }

  IngestConfig ToConfig() const {
    if (delimiter.size() != 1) {
      throw ParameterError("--delimiter must be a single character");
    }
    IngestConfig c;
    c.delimiter = delimiter[0];
    c.group_column = group_column;
    c.treatment_values = treatment_values;
    c.control_values = control_values;
    c.outcome_column = outcome_column;
    c.positive_values = positive_values;
    c.negative_values = negative_values;
    c.missing_tokens = missing_tokens;
    c.column_names = column_names;
    c.keep_group_feature = keep_group_feature;
    return c;
  }
};

struct SplitFlags {
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::string stratify = "group,outcome";

  void Register(CLI::App* app, const char* what) {
    app->add_option("--split", fraction,
                    std::string("Stratified train fraction; ") + what)
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--seed", seed, "Split seed")->capture_default_str();
    app->add_option("--stratify", stratify,
                    "Stratification keys (only group,outcome is supported)")
        ->capture_default_str();
  }

  std::optional<TrainTestSplit> Apply(const Dataset& data) const {
    if (stratify != "group,outcome" && stratify != "outcome,group") {
      throw ParameterError("--stratify supports only group,outcome");
    }
    if (fraction <= 0.0) return std::nullopt;
    if (fraction >= 1.0) throw ParameterError("--split must be below 1");
    return StratifiedSplit(data, fraction, seed);
  }
};

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string Pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

Dataset Prepare(const Dataset& raw, double filter, bool one_hot,
                std::vector<std::string>* kept) {
  Dataset data = raw;
  if (filter > 0.0) {
    data = DistributionFilter(raw, filter);
    *kept = data.FeatureNames();
  }
  if (one_hot) data = OneHotEncode(data);
  if (data.HasCategorical()) {
    throw ParameterError(
        "categorical attributes present; pass --one-hot to encode them");
  }
  return data;
}

void RequireBothGroups(const Dataset& data, const RowSet& rows) {
  const GroupCounts c = CountGroups(data, rows);
  if (c.n_t == 0) throw DataError("training data has no treatment rows");
  if (c.n_c == 0) throw DataError("training data has no control rows");
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

// --- generate --------------------------------------------------------------

struct GenerateCommand {
  std::string preset;
  SynthSpec spec;
  std::string output;

  void Register(CLI::App* app) {
    app->add_option("--preset", preset, "Named spec (paper-synthetic)")
        ->check(CLI::IsMember({"paper-synthetic"}));
    app->add_option("--seed", spec.seed)->capture_default_str();
    app->add_option("--n-treatment", spec.n_treatment)->capture_default_str();
    app->add_option("--n-control", spec.n_control)->capture_default_str();
    app->add_option("--n-informative", spec.n_informative)
        ->capture_default_str();
    app->add_option("--n-irrelevant", spec.n_irrelevant)
        ->capture_default_str();
    app->add_option("--n-uplift", spec.n_uplift)->capture_default_str();
    app->add_option("--n-mix", spec.n_mix)->capture_default_str();
    app->add_option("--base-response", spec.base_response)
        ->capture_default_str();
    app->add_option("--treatment-lift", spec.treatment_lift)
        ->capture_default_str();
    app->add_option("-o,--output", output, "CSV path")->required();
  }

  int Execute(std::ostream& out) const {
    // The preset equals the defaults; explicit flags refine it.
    const Dataset data = Generate(spec);
    WriteCsv(data, output);
    const GroupCounts c = CountGroups(data);
    out << "wrote " << data.num_rows() << " rows, " << data.num_features()
        << " features to " << output << "\n"
        << "treatment " << c.n_t << " rows, response rate "
        << Fixed(static_cast<double>(c.y_t) / static_cast<double>(c.n_t), 4)
        << "\ncontrol " << c.n_c << " rows, response rate "
        << Fixed(static_cast<double>(c.y_c) / static_cast<double>(c.n_c), 4)
        << "\n";
    return kOk;
  }
};

// --- train -----------------------------------------------------------------

struct TrainCommand {
  std::string data_path;
  std::string kind;
  std::string output;
  IngestFlags ingest;
  SplitFlags split;
  TreeConfig config;
  int rule_count = 3;
  std::string gain_reference = "parent";
  bool one_hot = false;
  double filter = 0.0;

  void Register(CLI::App* app) {
    app->add_option("--data", data_path, "Training CSV")->required();
    app->add_option("--model", kind, "ciet-lg, ciet-lgr, kl or ed")
        ->required()
        ->check(CLI::IsMember({"ciet-lg", "ciet-lgr", "kl", "ed"}));
    app->add_option("-o,--output", output, "Model document path")->required();
    app->add_option("--max-depth", config.max_depth)->capture_default_str();
    app->add_option("--rule-count", rule_count)->capture_default_str();
    app->add_option("--cost", config.cost)->capture_default_str();
    app->add_option("--min-samples", config.constraints.min_samples)
        ->capture_default_str();
    app->add_option("--min-recall", config.constraints.min_recall)
        ->capture_default_str();
    app->add_option("--min-delta", config.constraints.min_delta)
        ->capture_default_str();
    app->add_option("--max-bins", config.constraints.max_bins)
        ->capture_default_str();
    app->add_flag("--strict-recall", config.constraints.strict_recall,
                  "Apply min-recall to the control group too");
    app->add_option("--gain-reference", gain_reference,
                    "Uplift baseline for LG/LGR: parent or root")
        ->check(CLI::IsMember({"parent", "root"}))
        ->capture_default_str();
    app->add_flag("--one-hot", one_hot, "One-hot encode categorical columns");
    app->add_option("--distribution-filter", filter,
                    "Drop attributes whose treatment/control total variation "
                    "distance exceeds this")
        ->check(CLI::Range(0.0, 1.0));
    ingest.Register(app);
    split.Register(app, "train on that share only");
  }

  int Execute(std::ostream& out) {
    const Dataset raw = LoadCsv(data_path, ingest.ToConfig());
    ModelDocument doc;
    doc.one_hot = one_hot;
    const Dataset data = Prepare(raw, filter, one_hot, &doc.kept_attributes);
    doc.features = data.FeatureNames();
    const auto parts = split.Apply(raw);
    const RowSet rows = parts ? parts->train : data.AllRows();
    RequireBothGroups(data, rows);

    if (kind == "kl" || kind == "ed") {
      const CriterionKind div =
          kind == "kl" ? CriterionKind::kKL : CriterionKind::kED;
      BaselineTree tree = LearnBaselineTree(data, rows, div, config.constraints,
                                            config.max_depth);
      out << RenderTree(tree);
      doc.model = std::move(tree);
    } else {
      config.criterion =
          kind == "ciet-lg" ? CriterionKind::kLG : CriterionKind::kLGR;
      config.reference = ParseGainReference(gain_reference);
      RuleSetModel model = LearnRuleSet(data, rows, config, rule_count);
      out << RenderRuleTable(model);
      doc.model = std::move(model);
    }
    SaveModel(doc, output);
    out << "model written to " << output << "\n";
    return kOk;
  }
};

// --- eval ------------------------------------------------------------------

struct EvalCommand {
  std::string data_path;
  std::vector<std::string> models;
  std::vector<std::string> names;
  IngestFlags ingest;
  SplitFlags split;
  EvalOptions options;
  std::string scoring = "first-match";
  std::string prefix;

  void Register(CLI::App* app) {
    app->add_option("--data", data_path, "Evaluation CSV")->required();
    app->add_option("--model", models, "Model documents")->required();
    app->add_option("--name", names, "Display names, one per model")
        ->delimiter(',');
    app->add_option("--tie-seeds", options.tie_seeds,
                    "Tie permutations averaged per curve")
        ->capture_default_str();
    app->add_option("--eval-seed", options.seed)->capture_default_str();
    app->add_option("--bins", options.bins, "Percentile bins for AUUC")
        ->capture_default_str();
    app->add_option("--scoring", scoring, "first-match or max-uplift")
        ->check(CLI::IsMember({"first-match", "max-uplift"}))
        ->capture_default_str();
    app->add_option("--out-prefix", prefix,
                    "Write <prefix>_<model>_<set>.csv and <prefix>_<set>.svg");
    ingest.Register(app);
    split.Register(app, "report train and test separately");
  }

  int Execute(std::ostream& out) {
    if (!names.empty() && names.size() != models.size()) {
      throw ParameterError("--name needs one entry per --model");
    }
    const Dataset raw = LoadCsv(data_path, ingest.ToConfig());
    const auto parts = split.Apply(raw);
    std::vector<std::pair<std::string, RowSet>> sets;
    if (parts) {
      sets = {{"train", parts->train}, {"test", parts->test}};
    } else {
      sets = {{"all", raw.AllRows()}};
    }
    const ScoringMode mode = scoring == "max-uplift" ? ScoringMode::kMaxUplift
                                                     : ScoringMode::kFirstMatch;

    std::vector<std::string> labels;
    // evals[set][model]
    std::vector<std::vector<UpliftEvaluation>> evals(sets.size());
    for (std::size_t m = 0; m < models.size(); ++m) {
      const ModelDocument doc = LoadModel(models[m]);
      labels.push_back(names.empty()
                           ? std::filesystem::path(models[m]).stem().string()
                           : names[m]);
      const Dataset data = PrepareForModel(doc, raw);
      for (std::size_t s = 0; s < sets.size(); ++s) {
        const RowSet& rows = sets[s].second;
        const std::vector<double> scores =
            ScoreRowsFor(doc, data, rows, mode);
        std::vector<ScoredOutcome> scored(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          scored[i] = {scores[i], raw.group(rows[i]), raw.outcome(rows[i])};
        }
        evals[s].push_back(Evaluate(scored, options));
      }
    }

    out << Pad("model", 14) << Pad("set", 7) << Pad("n", 7) << Pad("AUUC", 11)
        << Pad("AUUC_norm", 11) << "Qini\n";
    for (std::size_t m = 0; m < models.size(); ++m) {
      for (std::size_t s = 0; s < sets.size(); ++s) {
        const UpliftEvaluation& e = evals[s][m];
        out << Pad(labels[m], 14) << Pad(sets[s].first, 7)
            << Pad(std::to_string(e.n), 7) << Pad(Fixed(e.auuc, 3), 11)
            << Pad(Fixed(e.auuc_normalized, 5), 11) << Fixed(e.qini, 4)
            << "\n";
      }
    }
    if (sets.size() == 2) {
      out << "\nQini drift (test - train)\n";
      for (std::size_t m = 0; m < models.size(); ++m) {
        out << Pad(labels[m], 14)
            << Fixed(evals[1][m].qini - evals[0][m].qini, 4) << "\n";
      }
    }
    if (!prefix.empty()) {
      for (std::size_t s = 0; s < sets.size(); ++s) {
        std::vector<NamedEvaluation> named;
        for (std::size_t m = 0; m < models.size(); ++m) {
          std::ofstream csv =
              OpenOutput(prefix + "_" + labels[m] + "_" + sets[s].first + ".csv");
          WriteCurveCsv(evals[s][m], csv);
          named.push_back({labels[m], &evals[s][m]});
        }
        std::ofstream svg = OpenOutput(prefix + "_" + sets[s].first + ".svg");
        svg << RenderUpliftSvg(named, "Uplift curves (" + sets[s].first + ")");
      }
      out << "\ncurves written with prefix " << prefix << "\n";
    }
    return kOk;
  }

  static std::vector<double> ScoreRowsFor(const ModelDocument& doc,
                                          const Dataset& data,
                                          const RowSet& rows,
                                          ScoringMode mode) {
    if (const auto* rs = std::get_if<RuleSetModel>(&doc.model)) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const RuleMatch& r : ScoreRows(*rs, data, rows, mode)) {
        out.push_back(r.uplift);
      }
      return out;
    }
    return PredictBaseline(std::get<BaselineTree>(doc.model), data, rows);
  }
};

// --- score -----------------------------------------------------------------

struct ScoreCommand {
  std::string data_path;
  std::string model_path;
  std::string output;
  std::string scoring = "first-match";
  IngestFlags ingest;

  void Register(CLI::App* app) {
    app->add_option("--data", data_path)->required();
    app->add_option("--model", model_path)->required();
    app->add_option("-o,--output", output, "CSV path (default: stdout)");
    app->add_option("--scoring", scoring, "first-match or max-uplift")
        ->check(CLI::IsMember({"first-match", "max-uplift"}))
        ->capture_default_str();
    ingest.Register(app);
  }

  int Execute(std::ostream& out) const {
    const Dataset raw = LoadCsv(data_path, ingest.ToConfig());
    const ModelDocument doc = LoadModel(model_path);
    const Dataset data = PrepareForModel(doc, raw);
    const RowSet rows = data.AllRows();

    std::ostringstream csv;
    csv << "row,rule,uplift\n";
    char buf[64];
    if (const auto* rs = std::get_if<RuleSetModel>(&doc.model)) {
      const ScoringMode mode = scoring == "max-uplift"
                                   ? ScoringMode::kMaxUplift
                                   : ScoringMode::kFirstMatch;
      const auto matches = ScoreRows(*rs, data, rows, mode);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", matches[i].uplift);
        csv << i << ","
            << (matches[i].rule ? std::to_string(*matches[i].rule + 1)
                                : std::string("none"))
            << "," << buf << "\n";
      }
    } else {
      const auto& tree = std::get<BaselineTree>(doc.model);
      const BaselineScorer scorer(tree, data.schema());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t leaf = scorer.Leaf(data, i);
        std::snprintf(buf, sizeof(buf), "%.17g", tree.nodes[leaf].uplift);
        csv << i << ",leaf" << leaf << "," << buf << "\n";
      }
    }
    if (output.empty()) {
      out << csv.str();
    } else {
      std::ofstream file = OpenOutput(output);
      file << csv.str();
    }
    return kOk;
  }
};

// --- inspect ---------------------------------------------------------------

struct InspectCommand {
  std::string model_path;

  void Register(CLI::App* app) {
    app->add_option("--model", model_path)->required();
  }

  int Execute(std::ostream& out) const {
    const ModelDocument doc = LoadModel(model_path);
    if (const auto* rs = std::get_if<RuleSetModel>(&doc.model)) {
      out << "rule set, criterion " << CriterionName(rs->config.criterion)
          << ", max_depth " << rs->config.max_depth << ", rule_count "
          << rs->rule_count << ", gain reference "
          << GainReferenceName(rs->config.reference) << "\n\n"
          << RenderRuleTable(*rs) << "\n";
      for (std::size_t i = 0; i < rs->rules.size(); ++i) {
        out << i + 1 << ": " << RenderRule(rs->rules[i]) << "\n";
      }
    } else {
      const auto& tree = std::get<BaselineTree>(doc.model);
      out << "binary tree, divergence " << CriterionName(tree.divergence)
          << ", max_depth " << tree.max_depth << "\n\n"
          << RenderTree(tree);
    }
    if (doc.one_hot) out << "inputs are one-hot encoded\n";
    if (!doc.kept_attributes.empty()) {
      out << "attributes kept by the distribution filter:";
      for (const auto& a : doc.kept_attributes) out << " " << a;
      out << "\n";
    }
    return kOk;
  }
};

}  // namespace

Dataset PrepareForModel(const ModelDocument& document, const Dataset& raw) {
  Dataset data = raw;
  if (!document.kept_attributes.empty()) {
    std::vector<std::size_t> keep;
    for (const std::string& name : document.kept_attributes) {
      const auto f = raw.FindFeature(name);
      if (!f) throw SchemaError("data lacks attribute '" + name + "'");
      keep.push_back(*f);
    }
    data = raw.SelectFeatures(keep);
  }
  if (document.one_hot) data = OneHotEncode(data);
  return data;
}

std::vector<double> ScoreWithModel(const ModelDocument& document,
                                   const Dataset& prepared,
                                   const RowSet& rows) {
  return EvalCommand::ScoreRowsFor(document, prepared, rows,
                                   ScoringMode::kFirstMatch);
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app("Single-branch uplift rule ensembles and baseline uplift trees",
               "ciet");
  app.set_config("--config", "", "Flat key=value file; flags override it");
  app.require_subcommand(1);

  GenerateCommand generate;
  TrainCommand train;
  EvalCommand eval;
  ScoreCommand score;
  InspectCommand inspect;
  auto* gen_app = app.add_subcommand("generate", "Write a synthetic trial CSV");
  auto* train_app = app.add_subcommand("train", "Fit a model");
  auto* eval_app = app.add_subcommand("eval", "AUUC and Qini of models");
  auto* score_app = app.add_subcommand("score", "Per-row predicted uplift");
  auto* inspect_app = app.add_subcommand("inspect", "Print a model");
  generate.Register(gen_app);
  train.Register(train_app);
  eval.Register(eval_app);
  score.Register(score_app);
  inspect.Register(inspect_app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*gen_app) return generate.Execute(out);
    if (*train_app) return train.Execute(out);
    if (*eval_app) return eval.Execute(out);
    if (*score_app) return score.Execute(out);
    if (*inspect_app) return inspect.Execute(out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const UndefinedRateError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kSchemaOrModelError;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kSchemaOrModelError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace ciet::cli
