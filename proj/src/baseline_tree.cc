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

#include "ciet/baseline_tree.h"

#include <algorithm>
#include <exception>

#include "ciet/error.h"

namespace ciet {
namespace {

const std::optional<BinarySplit>& BetterBinary(
    const std::optional<BinarySplit>& a, const std::optional<BinarySplit>& b) {
  if (!b) return a;
  if (!a) return b;
  return b->gain > a->gain ? b : a;
}

struct Builder {
  const Dataset& data;
  CriterionKind divergence;
  const SplitConstraints& constraints;
  int max_depth;
  std::vector<BaselineNode>& nodes;

  std::int32_t Grow(const RowSet& rows, int depth) {
    const auto index = static_cast<std::int32_t>(nodes.size());
    BaselineNode node;
    node.counts = CountGroups(data, rows);
    node.uplift = UpliftRate(node.counts);
    nodes.push_back(node);
    if (depth >= max_depth) return index;

    const auto split =
        BestBinarySplit(data, rows, divergence, constraints);
    if (!split) return index;

    // Rows without a value follow the larger side.
    const bool missing_left = split->left.total() >= split->right.total();
    const auto column = data.column(split->feature);
    RowSet left_rows, right_rows;
    for (std::size_t r : rows) {
      const double v = column[r];
      const bool go_left = IsMissing(v) ? missing_left : v <= split->threshold;
      (go_left ? left_rows : right_rows).push_back(r);
    }
    const std::int32_t left = Grow(left_rows, depth + 1);
    const std::int32_t right = Grow(right_rows, depth + 1);
    BaselineNode& n = nodes[static_cast<std::size_t>(index)];
    n.left = left;
    n.right = right;
    n.feature = split->feature_name;
    n.threshold = split->threshold;
    return index;
  }
};

}  // namespace

std::size_t BaselineTree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(),
                    [](const BaselineNode& n) { return n.is_leaf(); }));
}

std::optional<BinarySplit> BestBinarySplitForFeature(
    const Dataset& data, std::span<const std::size_t> rows,
    std::size_t feature, CriterionKind divergence,
    const SplitConstraints& constraints) {
  if (IsSingleBranch(divergence)) {
    throw ParameterError("binary trees use the KL or ED divergence");
  }
  const FeatureHistogram hist =
      BuildFeatureHistogram(data, rows, feature, constraints.max_bins);
  if (hist.edges.empty()) return std::nullopt;
  GroupCounts observed;
  for (const GroupCounts& b : hist.bins) observed += b;

  std::optional<BinarySplit> best;
  GroupCounts left;
  for (std::size_t k = 0; k < hist.edges.size(); ++k) {
    left += hist.bins[k];
    const GroupCounts right = observed - left;
    if (!left.has_both_groups() || !right.has_both_groups()) continue;
    if (left.total() < constraints.min_samples ||
        right.total() < constraints.min_samples) {
      continue;
    }
    const double gain = ConditionalGain(divergence, observed, left, right);
    if (!(gain > constraints.min_delta)) continue;
    if (best && !(gain > best->gain)) continue;
    best = BinarySplit{feature, data.feature(feature).name, hist.edges[k],
                       gain,    left,  right};
  }
  return best;
}

std::optional<BinarySplit> BestBinarySplit(
    const Dataset& data, std::span<const std::size_t> rows,
    CriterionKind divergence, const SplitConstraints& constraints) {
  const auto n_features = static_cast<std::ptrdiff_t>(data.num_features());
  std::vector<std::optional<BinarySplit>> per_feature(data.num_features());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t f = 0; f < n_features; ++f) {
    try {
      per_feature[static_cast<std::size_t>(f)] = BestBinarySplitForFeature(
          data, rows, static_cast<std::size_t>(f), divergence, constraints);
    } catch (...) {
#pragma omp critical(ciet_binary_split_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::optional<BinarySplit> best;
  for (const auto& candidate : per_feature) {
    best = BetterBinary(best, candidate);
  }
  return best;
}

namespace serial {

std::optional<BinarySplit> BestBinarySplit(
    const Dataset& data, std::span<const std::size_t> rows,
    CriterionKind divergence, const SplitConstraints& constraints) {
  std::optional<BinarySplit> best;
  for (std::size_t f = 0; f < data.num_features(); ++f) {
    best = BetterBinary(best, BestBinarySplitForFeature(data, rows, f,
                                                        divergence,
                                                        constraints));
  }
  return best;
}

}  // namespace serial

BaselineTree LearnBaselineTree(const Dataset& data,
                               std::span<const std::size_t> rows,
                               CriterionKind divergence,
                               const SplitConstraints& constraints,
                               int max_depth) {
  if (IsSingleBranch(divergence)) {
    throw ParameterError("binary trees use the KL or ED divergence");
  }
  if (max_depth < 0) throw ParameterError("max_depth must be >= 0");
  constraints.Validate();
  BaselineTree tree;
  tree.divergence = divergence;
  tree.max_depth = max_depth;
  tree.constraints = constraints;
  Builder builder{data, divergence, constraints, max_depth, tree.nodes};
  builder.Grow(RowSet(rows.begin(), rows.end()), 0);
  return tree;
}

BaselineTree LearnBaselineTree(const Dataset& data, CriterionKind divergence,
                               const SplitConstraints& constraints,
                               int max_depth) {
  return LearnBaselineTree(data, data.AllRows(), divergence, constraints,
                           max_depth);
}

BaselineScorer::BaselineScorer(const BaselineTree& tree,
                               const std::vector<FeatureSpec>& schema)
    : tree_(&tree), columns_(tree.nodes.size(), 0) {
  if (tree.nodes.empty()) throw ModelError("baseline tree has no nodes");
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const BaselineNode& n = tree.nodes[i];
    if (n.is_leaf()) continue;
    auto it = std::find_if(schema.begin(), schema.end(),
                           [&](const FeatureSpec& s) {
                             return s.name == n.feature;
                           });
    if (it == schema.end()) {
      throw SchemaError("tree routes on unknown feature '" + n.feature + "'");
    }
    columns_[i] = static_cast<std::size_t>(it - schema.begin());
  }
}

template <typename ValueAt>
std::size_t BaselineScorer::Route(const ValueAt& value_at) const {
  std::size_t i = 0;
  while (!tree_->nodes[i].is_leaf()) {
    const BaselineNode& n = tree_->nodes[i];
    const double v = value_at(columns_[i]);
    bool go_left;
    if (IsMissing(v)) {
      const auto& l = tree_->nodes[static_cast<std::size_t>(n.left)];
      const auto& r = tree_->nodes[static_cast<std::size_t>(n.right)];
      go_left = l.counts.total() >= r.counts.total();
    } else {
      go_left = v <= n.threshold;
    }
    i = static_cast<std::size_t>(go_left ? n.left : n.right);
  }
  return i;
}

std::size_t BaselineScorer::Leaf(std::span<const double> features) const {
  return Route([&](std::size_t f) { return features[f]; });
}

std::size_t BaselineScorer::Leaf(const Dataset& data, std::size_t row) const {
  return Route([&](std::size_t f) { return data.value(row, f); });
}

double BaselineScorer::Score(std::span<const double> features) const {
  return tree_->nodes[Leaf(features)].uplift;
}

double BaselineScorer::Score(const Dataset& data, std::size_t row) const {
  return tree_->nodes[Leaf(data, row)].uplift;
}

double PredictBaseline(const BaselineTree& tree,
                       const std::vector<FeatureSpec>& schema,
                       const Observation& observation) {
  return BaselineScorer(tree, schema).Score(observation.features);
}

std::vector<double> PredictBaseline(const BaselineTree& tree,
                                    const Dataset& data,
                                    std::span<const std::size_t> rows) {
  const BaselineScorer scorer(tree, data.schema());
  std::vector<double> out(rows.size());
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = scorer.Score(data, rows[k]);
  }
  return out;
}

}  // namespace ciet
