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

#include "ciet/data.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "ciet/error.h"

namespace ciet {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> ParseNumber(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

// Splits one logical CSV record. Handles quoted fields (with "" escapes);
// a quoted field may span physical lines, in which case more lines are pulled
// from `in` and `line_no` advances.
bool ReadRecord(std::istream& in, char delim, std::vector<std::string>* out,
                std::size_t* line_no) {
  std::string line;
  if (!std::getline(in, line)) return false;
  ++*line_no;
  out->clear();
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next)) {
          throw DataError("line " + std::to_string(*line_no) +
                          ": unterminated quoted field");
        }
        ++*line_no;
        field.push_back('\n');
        line = std::move(next);
        i = 0;
        continue;
      }
      out->push_back(std::move(field));
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      out->push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
    ++i;
  }
  return true;
}

bool Contains(const std::vector<std::string>& values, std::string_view v) {
  return std::find(values.begin(), values.end(), v) != values.end();
}

bool HasWildcard(const std::vector<std::string>& values) {
  return Contains(values, "*");
}

// Maps a cell through a two-sided explicit mapping with optional "*".
// Returns 0 for the first side, 1 for the second, nullopt when unmapped.
std::optional<int> MapBinary(std::string_view cell,
                             const std::vector<std::string>& first,
                             const std::vector<std::string>& second) {
  if (Contains(first, cell)) return 0;
  if (Contains(second, cell)) return 1;
  if (HasWildcard(first)) return 0;
  if (HasWildcard(second)) return 1;
  return std::nullopt;
}

std::string FormatNumber(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void WriteField(std::ostream& out, std::string_view s, char delim) {
  const bool needs_quotes =
      s.find_first_of(std::string{delim, '"', '\n', '\r'}) !=
      std::string_view::npos;
  if (!needs_quotes) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::string_view GroupName(Group group) {
  return group == Group::kTreatment ? "treatment" : "control";
}

bool IsMissing(double v) { return std::isnan(v); }

double UpliftRate(const GroupCounts& counts) {
  if (!counts.has_both_groups()) {
    throw UndefinedRateError("uplift rate undefined: empty treatment or control"
                             " group (n_t=" +
                             std::to_string(counts.n_t) +
                             ", n_c=" + std::to_string(counts.n_c) + ")");
  }
  return static_cast<double>(counts.y_t) / static_cast<double>(counts.n_t) -
         static_cast<double>(counts.y_c) / static_cast<double>(counts.n_c);
}

Dataset::Dataset(std::vector<FeatureSpec> schema,
                 std::vector<std::vector<double>> columns,
                 std::vector<Group> groups, std::vector<std::uint8_t> outcomes)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      groups_(std::move(groups)),
      outcomes_(std::move(outcomes)) {
  if (columns_.size() != schema_.size()) {
    throw DataError("column count does not match schema arity");
  }
  if (outcomes_.size() != groups_.size()) {
    throw DataError("outcome and group vectors differ in length");
  }
  for (std::uint8_t y : outcomes_) {
    if (y > 1) throw DataError("outcome outside {0,1}");
  }
  for (std::size_t f = 0; f < schema_.size(); ++f) {
    if (columns_[f].size() != groups_.size()) {
      throw DataError("column '" + schema_[f].name + "' has wrong length");
    }
    if (schema_[f].kind == FeatureKind::kCategorical) {
      const double n_levels = static_cast<double>(schema_[f].levels.size());
      for (double v : columns_[f]) {
        if (IsMissing(v)) continue;
        if (v < 0 || v >= n_levels || v != std::floor(v)) {
          throw DataError("invalid category code in column '" +
                          schema_[f].name + "'");
        }
      }
    }
  }
}

Dataset Dataset::FromObservations(std::vector<FeatureSpec> schema,
                                  std::span<const Observation> rows) {
  std::vector<std::vector<double>> columns(schema.size());
  for (auto& c : columns) c.reserve(rows.size());
  std::vector<Group> groups;
  std::vector<std::uint8_t> outcomes;
  groups.reserve(rows.size());
  outcomes.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Observation& obs = rows[i];
    if (obs.features.size() != schema.size()) {
      throw DataError("row " + std::to_string(i) +
                      ": feature vector length differs from schema arity");
    }
    if (obs.outcome != 0 && obs.outcome != 1) {
      throw DataError("row " + std::to_string(i) + ": outcome outside {0,1}");
    }
    for (std::size_t f = 0; f < schema.size(); ++f) {
      columns[f].push_back(obs.features[f]);
    }
    groups.push_back(obs.group);
    outcomes.push_back(static_cast<std::uint8_t>(obs.outcome));
  }
  return Dataset(std::move(schema), std::move(columns), std::move(groups),
                 std::move(outcomes));
}

Observation Dataset::row(std::size_t i) const {
  return Observation{features(i), groups_[i], outcomes_[i]};
}

std::vector<double> Dataset::features(std::size_t i) const {
  std::vector<double> out(columns_.size());
  for (std::size_t f = 0; f < columns_.size(); ++f) out[f] = columns_[f][i];
  return out;
}

std::optional<std::size_t> Dataset::FindFeature(std::string_view name) const {
  for (std::size_t f = 0; f < schema_.size(); ++f) {
    if (schema_[f].name == name) return f;
  }
  return std::nullopt;
}

std::vector<std::string> Dataset::FeatureNames() const {
  std::vector<std::string> names;
  names.reserve(schema_.size());
  for (const auto& s : schema_) names.push_back(s.name);
  return names;
}

RowSet Dataset::AllRows() const {
  RowSet rows(num_rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> columns(columns_.size());
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    columns[f].reserve(rows.size());
    for (std::size_t r : rows) columns[f].push_back(columns_[f][r]);
  }
  std::vector<Group> groups;
  std::vector<std::uint8_t> outcomes;
  groups.reserve(rows.size());
  outcomes.reserve(rows.size());
  for (std::size_t r : rows) {
    groups.push_back(groups_[r]);
    outcomes.push_back(outcomes_[r]);
  }
  return Dataset(schema_, std::move(columns), std::move(groups),
                 std::move(outcomes));
}

Dataset Dataset::SelectFeatures(std::span<const std::size_t> features) const {
  std::vector<FeatureSpec> schema;
  std::vector<std::vector<double>> columns;
  for (std::size_t f : features) {
    schema.push_back(schema_.at(f));
    columns.push_back(columns_.at(f));
  }
  return Dataset(std::move(schema), std::move(columns), groups_, outcomes_);
}

bool Dataset::HasCategorical() const {
  return std::any_of(schema_.begin(), schema_.end(), [](const FeatureSpec& s) {
    return s.kind == FeatureKind::kCategorical;
  });
}

bool Dataset::operator==(const Dataset& other) const {
  if (schema_ != other.schema_ || groups_ != other.groups_ ||
      outcomes_ != other.outcomes_) {
    return false;
  }
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    const auto& a = columns_[f];
    const auto& b = other.columns_[f];
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (IsMissing(a[i]) != IsMissing(b[i])) return false;
      if (!IsMissing(a[i]) && a[i] != b[i]) return false;
    }
  }
  return true;
}

GroupCounts CountGroups(const Dataset& data) {
  GroupCounts c;
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    c.Add(data.group(i), data.outcome(i));
  }
  return c;
}

GroupCounts CountGroups(const Dataset& data,
                        std::span<const std::size_t> rows) {
  GroupCounts c;
  for (std::size_t r : rows) c.Add(data.group(r), data.outcome(r));
  return c;
}

Dataset ReadCsv(std::istream& in, const IngestConfig& config,
                std::string_view source_name) {
  if (HasWildcard(config.treatment_values) &&
      HasWildcard(config.control_values)) {
    throw ParameterError("'*' may appear in only one group mapping");
  }
  if (HasWildcard(config.positive_values) &&
      HasWildcard(config.negative_values)) {
    throw ParameterError("'*' may appear in only one outcome mapping");
  }

  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::string> record;
  if (!config.column_names.empty()) {
    header = config.column_names;
  } else if (!ReadRecord(in, config.delimiter, &header, &line_no)) {
    throw SchemaError(std::string(source_name) + ": missing header row");
  }
  for (auto& h : header) h = std::string(Trim(h));

  auto find_column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw SchemaError(std::string(source_name) + ": missing column '" +
                        name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t group_col = find_column(config.group_column);
  const std::size_t outcome_col = find_column(config.outcome_column);

  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == outcome_col) continue;
    if (c == group_col && !config.keep_group_feature) continue;
    feature_cols.push_back(c);
  }

  // Raw cells first; the schema is inferred once every row is known.
  std::vector<std::vector<std::string>> raw(feature_cols.size());
  std::vector<Group> groups;
  std::vector<std::uint8_t> outcomes;
  while (ReadRecord(in, config.delimiter, &record, &line_no)) {
    if (record.size() == 1 && Trim(record[0]).empty()) continue;
    const std::string where =
        std::string(source_name) + " line " + std::to_string(line_no);
    if (record.size() != header.size()) {
      throw DataError(where + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(record.size()));
    }
    const std::string_view group_cell = Trim(record[group_col]);
    const auto g = MapBinary(group_cell, config.treatment_values,
                             config.control_values);
    if (!g) {
      throw DataError(where + ": group value '" + std::string(group_cell) +
                      "' maps to neither treatment nor control");
    }
    const std::string_view outcome_cell = Trim(record[outcome_col]);
    const auto y = MapBinary(outcome_cell, config.negative_values,
                             config.positive_values);
    if (!y) {
      throw DataError(where + ": outcome value '" + std::string(outcome_cell) +
                      "' maps to neither 0 nor 1");
    }
    groups.push_back(*g == 0 ? Group::kTreatment : Group::kControl);
    outcomes.push_back(static_cast<std::uint8_t>(*y));
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      raw[k].emplace_back(Trim(record[feature_cols[k]]));
    }
  }

  std::vector<FeatureSpec> schema;
  std::vector<std::vector<double>> columns;
  for (std::size_t k = 0; k < feature_cols.size(); ++k) {
    FeatureSpec spec;
    spec.name = header[feature_cols[k]];
    const auto& cells = raw[k];
    bool numeric = true;
    for (const auto& cell : cells) {
      if (Contains(config.missing_tokens, cell)) continue;
      if (!ParseNumber(cell)) {
        numeric = false;
        break;
      }
    }
    std::vector<double> column(cells.size(), kMissing);
    if (numeric) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (Contains(config.missing_tokens, cells[i])) continue;
        column[i] = *ParseNumber(cells[i]);
      }
    } else {
      spec.kind = FeatureKind::kCategorical;
      std::map<std::string, double> codes;
      for (const auto& cell : cells) {
        if (!Contains(config.missing_tokens, cell)) codes.emplace(cell, 0.0);
      }
      double next = 0.0;
      for (auto& [level, code] : codes) {
        code = next;
        next += 1.0;
        spec.levels.push_back(level);
      }
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (Contains(config.missing_tokens, cells[i])) continue;
        column[i] = codes.at(cells[i]);
      }
    }
    schema.push_back(std::move(spec));
    columns.push_back(std::move(column));
  }
  return Dataset(std::move(schema), std::move(columns), std::move(groups),
                 std::move(outcomes));
}

Dataset LoadCsv(const std::string& path, const IngestConfig& config) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return ReadCsv(in, config, path);
}

void WriteCsv(const Dataset& data, std::ostream& out,
              const CsvWriteOptions& options) {
  const char d = options.delimiter;
  for (std::size_t f = 0; f < data.num_features(); ++f) {
    WriteField(out, data.feature(f).name, d);
    out << d;
  }
  WriteField(out, options.group_column, d);
  out << d;
  WriteField(out, options.outcome_column, d);
  out << '\n';
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    for (std::size_t f = 0; f < data.num_features(); ++f) {
      const double v = data.value(i, f);
      const FeatureSpec& spec = data.feature(f);
      if (!IsMissing(v)) {
        if (spec.kind == FeatureKind::kCategorical) {
          WriteField(out, spec.levels[static_cast<std::size_t>(v)], d);
        } else {
          out << FormatNumber(v);
        }
      }
      out << d;
    }
    WriteField(out,
               data.group(i) == Group::kTreatment ? options.treatment_value
                                                  : options.control_value,
               d);
    out << d << data.outcome(i) << '\n';
  }
}

void WriteCsv(const Dataset& data, const std::string& path,
              const CsvWriteOptions& options) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  WriteCsv(data, out, options);
  if (!out) throw DataError("write failed for '" + path + "'");
}

Dataset OneHotEncode(const Dataset& data) {
  if (!data.HasCategorical()) return data;
  std::vector<FeatureSpec> schema;
  std::vector<std::vector<double>> columns;
  for (std::size_t f = 0; f < data.num_features(); ++f) {
    const FeatureSpec& spec = data.feature(f);
    const auto column = data.column(f);
    if (spec.kind == FeatureKind::kNumeric) {
      schema.push_back(spec);
      columns.emplace_back(column.begin(), column.end());
      continue;
    }
    for (std::size_t level = 0; level < spec.levels.size(); ++level) {
      schema.push_back(FeatureSpec{spec.name + "=" + spec.levels[level],
                                   FeatureKind::kNumeric, {}});
      std::vector<double> indicator(column.size());
      for (std::size_t i = 0; i < column.size(); ++i) {
        indicator[i] = IsMissing(column[i])
                           ? kMissing
                           : (column[i] == static_cast<double>(level) ? 1.0
                                                                      : 0.0);
      }
      columns.push_back(std::move(indicator));
    }
  }
  return Dataset(std::move(schema), std::move(columns),
                 std::vector<Group>(data.groups().begin(), data.groups().end()),
                 std::vector<std::uint8_t>(data.outcomes().begin(),
                                           data.outcomes().end()));
}

double DistributionDifference(const Dataset& data, std::size_t feature) {
  const auto column = data.column(feature);
  const FeatureSpec& spec = data.feature(feature);

  // Bin index per non-missing value.
  std::vector<double> edges;
  std::size_t n_bins = 0;
  if (spec.kind == FeatureKind::kCategorical) {
    n_bins = spec.levels.size();
  } else {
    std::vector<double> pooled;
    for (double v : column) {
      if (!IsMissing(v)) pooled.push_back(v);
    }
    std::sort(pooled.begin(), pooled.end());
    if (!pooled.empty()) {
      const std::size_t n = pooled.size();
      for (std::size_t k = 1; k < 10; ++k) {
        // Nearest-rank decile.
        const std::size_t rank = (k * n + 9) / 10;
        edges.push_back(pooled[std::max<std::size_t>(rank, 1) - 1]);
      }
    }
    n_bins = edges.size() + 1;
  }

  std::vector<double> freq_t(n_bins, 0.0), freq_c(n_bins, 0.0);
  double total_t = 0.0, total_c = 0.0;
  for (std::size_t i = 0; i < column.size(); ++i) {
    const double v = column[i];
    if (IsMissing(v)) continue;
    std::size_t bin = 0;
    if (spec.kind == FeatureKind::kCategorical) {
      bin = static_cast<std::size_t>(v);
    } else {
      bin = static_cast<std::size_t>(
          std::lower_bound(edges.begin(), edges.end(), v) - edges.begin());
    }
    if (data.group(i) == Group::kTreatment) {
      freq_t[bin] += 1.0;
      total_t += 1.0;
    } else {
      freq_c[bin] += 1.0;
      total_c += 1.0;
    }
  }
  if (total_t == 0.0 && total_c == 0.0) return 0.0;
  if (total_t == 0.0 || total_c == 0.0) return 1.0;
  double tv = 0.0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    tv += std::abs(freq_t[b] / total_t - freq_c[b] / total_c);
  }
  return 0.5 * tv;
}

Dataset DistributionFilter(const Dataset& data, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ParameterError("distribution filter threshold must lie in (0, 1]");
  }
  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < data.num_features(); ++f) {
    if (DistributionDifference(data, f) <= threshold) keep.push_back(f);
  }
  return data.SelectFeatures(keep);
}

TrainTestSplit StratifiedSplit(const Dataset& data, double train_fraction,
                               std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ParameterError("train fraction must lie in (0, 1)");
  }
  std::array<RowSet, 4> strata;
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    const std::size_t s =
        (data.group(i) == Group::kTreatment ? 0 : 2) + data.outcome(i);
    strata[s].push_back(i);
  }
  std::mt19937_64 rng(seed);
  TrainTestSplit split;
  for (auto& stratum : strata) {
    std::shuffle(stratum.begin(), stratum.end(), rng);
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(stratum.size())));
    split.train.insert(split.train.end(), stratum.begin(),
                       stratum.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(),
                      stratum.begin() + static_cast<std::ptrdiff_t>(n_train),
                      stratum.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace ciet
