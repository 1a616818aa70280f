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

// Randomized-trial data model: observations carrying a treatment/control flag
// and a binary outcome, CSV ingestion, categorical encoding and the group
// sufficient statistics every criterion and metric is computed from.

#ifndef CIET_DATA_H_
#define CIET_DATA_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ciet {

enum class Group : std::uint8_t { kTreatment, kControl };

std::string_view GroupName(Group group);

enum class FeatureKind : std::uint8_t { kNumeric, kCategorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  // Categorical only: the value stored for a row is the index into `levels`.
  // Levels are kept in lexicographic order.
  std::vector<std::string> levels;

  bool operator==(const FeatureSpec&) const = default;
};

// One row. Missing feature values are NaN.
struct Observation {
  std::vector<double> features;
  Group group = Group::kControl;
  int outcome = 0;
};

// (N^T, N^C, Y^T, Y^C) over some set of rows.
struct GroupCounts {
  std::int64_t n_t = 0;
  std::int64_t n_c = 0;
  std::int64_t y_t = 0;
  std::int64_t y_c = 0;

  std::int64_t total() const { return n_t + n_c; }
  bool has_both_groups() const { return n_t > 0 && n_c > 0; }

  void Add(Group group, int outcome) {
    if (group == Group::kTreatment) {
      ++n_t;
      y_t += outcome;
    } else {
      ++n_c;
      y_c += outcome;
    }
  }

  GroupCounts& operator+=(const GroupCounts& o) {
    n_t += o.n_t;
    n_c += o.n_c;
    y_t += o.y_t;
    y_c += o.y_c;
    return *this;
  }
  GroupCounts& operator-=(const GroupCounts& o) {
    n_t -= o.n_t;
    n_c -= o.n_c;
    y_t -= o.y_t;
    y_c -= o.y_c;
    return *this;
  }
  friend GroupCounts operator+(GroupCounts a, const GroupCounts& b) {
    return a += b;
  }
  friend GroupCounts operator-(GroupCounts a, const GroupCounts& b) {
    return a -= b;
  }
  bool operator==(const GroupCounts&) const = default;

  // True when every field of *this is <= the matching field of `o`.
  bool WithinComponentwise(const GroupCounts& o) const {
    return n_t <= o.n_t && n_c <= o.n_c && y_t <= o.y_t && y_c <= o.y_c;
  }
  // 0 <= y <= n in both groups.
  bool IsConsistent() const {
    return n_t >= 0 && n_c >= 0 && y_t >= 0 && y_c >= 0 && y_t <= n_t &&
           y_c <= n_c;
  }
};

// P^T - P^C. Throws UndefinedRateError when either group is empty.
double UpliftRate(const GroupCounts& counts);

using RowSet = std::vector<std::size_t>;

// Column-major, immutable once constructed.
class Dataset {
 public:
  Dataset() = default;
  // Validates arity, outcome domain and categorical codes; throws DataError.
  Dataset(std::vector<FeatureSpec> schema,
          std::vector<std::vector<double>> columns, std::vector<Group> groups,
          std::vector<std::uint8_t> outcomes);

  static Dataset FromObservations(std::vector<FeatureSpec> schema,
                                  std::span<const Observation> rows);

  std::size_t num_rows() const { return groups_.size(); }
  std::size_t num_features() const { return schema_.size(); }
  const std::vector<FeatureSpec>& schema() const { return schema_; }
  const FeatureSpec& feature(std::size_t f) const { return schema_[f]; }

  std::span<const double> column(std::size_t f) const { return columns_[f]; }
  double value(std::size_t row, std::size_t f) const {
    return columns_[f][row];
  }
  Group group(std::size_t row) const { return groups_[row]; }
  int outcome(std::size_t row) const { return outcomes_[row]; }
  std::span<const Group> groups() const { return groups_; }
  std::span<const std::uint8_t> outcomes() const { return outcomes_; }

  Observation row(std::size_t i) const;
  // Feature values of one row, in schema order.
  std::vector<double> features(std::size_t i) const;

  std::optional<std::size_t> FindFeature(std::string_view name) const;
  std::vector<std::string> FeatureNames() const;

  RowSet AllRows() const;
  Dataset Subset(std::span<const std::size_t> rows) const;
  Dataset SelectFeatures(std::span<const std::size_t> features) const;

  bool HasCategorical() const;

  // NaN-aware equality: missing values compare equal to each other.
  bool operator==(const Dataset& other) const;

 private:
  std::vector<FeatureSpec> schema_;
  std::vector<std::vector<double>> columns_;
  std::vector<Group> groups_;
  std::vector<std::uint8_t> outcomes_;
};

GroupCounts CountGroups(const Dataset& data);
GroupCounts CountGroups(const Dataset& data, std::span<const std::size_t> rows);

bool IsMissing(double v);

// CSV ingestion. Group and outcome mappings are always explicit. A mapping
// value of "*" matches every cell not matched by the opposite mapping.
struct IngestConfig {
  char delimiter = ',';
  std::string group_column = "group";
  std::vector<std::string> treatment_values = {"treatment"};
  std::vector<std::string> control_values = {"control"};
  std::string outcome_column = "outcome";
  std::vector<std::string> positive_values = {"1"};
  std::vector<std::string> negative_values = {"0"};
  std::vector<std::string> missing_tokens = {"", "?", "NA"};
  // When non-empty the file carries no header row and these names are used.
  std::vector<std::string> column_names;
  // Keep the group column as an ordinary input attribute as well.
  bool keep_group_feature = false;
};

// Throws SchemaError for missing columns and DataError (naming the 1-based
// line number) for unmappable rows.
Dataset LoadCsv(const std::string& path, const IngestConfig& config);
Dataset ReadCsv(std::istream& in, const IngestConfig& config,
                std::string_view source_name = "<stream>");

struct CsvWriteOptions {
  char delimiter = ',';
  std::string group_column = "group";
  std::string treatment_value = "treatment";
  std::string control_value = "control";
  std::string outcome_column = "outcome";
};

// Numbers are written with 17 significant digits so that a reload is exact.
void WriteCsv(const Dataset& data, std::ostream& out,
              const CsvWriteOptions& options = {});
void WriteCsv(const Dataset& data, const std::string& path,
              const CsvWriteOptions& options = {});

// Replaces each categorical column with one 0/1 column per level, named
// "<column>=<level>", levels in lexicographic order. Missing stays missing.
Dataset OneHotEncode(const Dataset& data);

// Total variation distance between the treatment and control distributions
// of one attribute: over category frequencies for categorical attributes and
// over pooled decile bins for numeric ones. Missing values are ignored.
double DistributionDifference(const Dataset& data, std::size_t feature);

// Drops every attribute whose DistributionDifference exceeds `threshold`.
// threshold must lie in (0, 1]; throws ParameterError otherwise.
Dataset DistributionFilter(const Dataset& data, double threshold);

struct TrainTestSplit {
  RowSet train;
  RowSet test;
};

// Stratified by (group, outcome). Each stratum contributes
// round(train_fraction * size) rows to train. Both sides sorted ascending.
TrainTestSplit StratifiedSplit(const Dataset& data, double train_fraction,
                               std::uint64_t seed);

}  // namespace ciet

#endif  // CIET_DATA_H_
