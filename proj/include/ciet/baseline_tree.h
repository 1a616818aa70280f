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

// Binary uplift decision trees grown greedily on the conditional KL or
// squared-Euclidean divergence gain. Thresholds come from the same
// enumeration as the single-branch search, so only the criterion differs.

#ifndef CIET_BASELINE_TREE_H_
#define CIET_BASELINE_TREE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ciet/criteria.h"
#include "ciet/data.h"
#include "ciet/split_search.h"

namespace ciet {

struct BaselineNode {
  // Children index into BaselineTree::nodes; -1 on leaves.
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::string feature;
  // Rows with value <= threshold go left.
  double threshold = 0.0;
  // Training rows reaching this node.
  GroupCounts counts;
  double uplift = 0.0;

  bool is_leaf() const { return left < 0; }
  bool operator==(const BaselineNode&) const = default;
};

struct BaselineTree {
  CriterionKind divergence = CriterionKind::kKL;
  int max_depth = 3;
  SplitConstraints constraints;
  // nodes[0] is the root.
  std::vector<BaselineNode> nodes;

  std::size_t num_leaves() const;
  bool operator==(const BaselineTree&) const = default;
};

struct BinarySplit {
  std::size_t feature = 0;
  std::string feature_name;
  double threshold = 0.0;
  double gain = 0.0;
  // Over rows with a value for the feature.
  GroupCounts left;
  GroupCounts right;
};

// Each side needs both groups and at least min_samples rows; the gain must
// exceed min_delta. Ties go to the smaller threshold.
std::optional<BinarySplit> BestBinarySplitForFeature(
    const Dataset& data, std::span<const std::size_t> rows,
    std::size_t feature, CriterionKind divergence,
    const SplitConstraints& constraints);

// All features in parallel; ties go to the earlier feature.
std::optional<BinarySplit> BestBinarySplit(const Dataset& data,
                                           std::span<const std::size_t> rows,
                                           CriterionKind divergence,
                                           const SplitConstraints& constraints);

namespace serial {

std::optional<BinarySplit> BestBinarySplit(const Dataset& data,
                                           std::span<const std::size_t> rows,
                                           CriterionKind divergence,
                                           const SplitConstraints& constraints);

}  // namespace serial

// Throws ParameterError for a non-divergence criterion, UndefinedRateError
// when `rows` lacks a group.
BaselineTree LearnBaselineTree(const Dataset& data,
                               std::span<const std::size_t> rows,
                               CriterionKind divergence,
                               const SplitConstraints& constraints,
                               int max_depth);
BaselineTree LearnBaselineTree(const Dataset& data, CriterionKind divergence,
                               const SplitConstraints& constraints,
                               int max_depth);

class BaselineScorer {
 public:
  // Throws SchemaError when the tree routes on a feature absent from schema.
  BaselineScorer(const BaselineTree& tree,
                 const std::vector<FeatureSpec>& schema);

  // Index of the leaf reached. A missing routing value follows the child
  // with more training rows (left on ties).
  std::size_t Leaf(std::span<const double> features) const;
  std::size_t Leaf(const Dataset& data, std::size_t row) const;
  double Score(std::span<const double> features) const;
  double Score(const Dataset& data, std::size_t row) const;

 private:
  template <typename ValueAt>
  std::size_t Route(const ValueAt& value_at) const;

  const BaselineTree* tree_;
  // Schema column per node (unused for leaves).
  std::vector<std::size_t> columns_;
};

double PredictBaseline(const BaselineTree& tree,
                       const std::vector<FeatureSpec>& schema,
                       const Observation& observation);

// Scores `rows` in parallel.
std::vector<double> PredictBaseline(const BaselineTree& tree,
                                    const Dataset& data,
                                    std::span<const std::size_t> rows);

}  // namespace ciet

#endif  // CIET_BASELINE_TREE_H_
