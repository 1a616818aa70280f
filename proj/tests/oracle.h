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

// Brute-force reference implementations used as test oracles. They recount
// every candidate from the raw rows instead of sweeping histograms.

#ifndef CIET_TESTS_ORACLE_H_
#define CIET_TESTS_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "ciet/criteria.h"
#include "ciet/data.h"
#include "ciet/metrics.h"
#include "ciet/split_search.h"

namespace ciet::oracle {

struct Counts {
  double n_t = 0, n_c = 0, y_t = 0, y_c = 0;
};

inline Counts CountWhere(const Dataset& data, std::span<const std::size_t> rows,
                         std::size_t feature, bool (*keep)(double, double),
                         double threshold) {
  Counts c;
  for (std::size_t r : rows) {
    const double v = data.value(r, feature);
    if (std::isnan(v) || !keep(v, threshold)) continue;
    if (data.group(r) == Group::kTreatment) {
      c.n_t += 1;
      c.y_t += data.outcome(r);
    } else {
      c.n_c += 1;
      c.y_c += data.outcome(r);
    }
  }
  return c;
}

inline Counts CountAll(const Dataset& data, std::span<const std::size_t> rows) {
  Counts c;
  for (std::size_t r : rows) {
    if (data.group(r) == Group::kTreatment) {
      c.n_t += 1;
      c.y_t += data.outcome(r);
    } else {
      c.n_c += 1;
      c.y_c += data.outcome(r);
    }
  }
  return c;
}

inline Counts FromGroupCounts(const GroupCounts& g) {
  return {static_cast<double>(g.n_t), static_cast<double>(g.n_c),
          static_cast<double>(g.y_t), static_cast<double>(g.y_c)};
}

inline double Uplift(const Counts& c) { return c.y_t / c.n_t - c.y_c / c.n_c; }

// Midpoints between adjacent distinct non-missing values.
inline std::vector<double> Midpoints(const Dataset& data,
                                     std::span<const std::size_t> rows,
                                     std::size_t feature) {
  std::vector<double> v;
  for (std::size_t r : rows) {
    const double x = data.value(r, feature);
    if (!std::isnan(x)) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<double> mids;
  for (std::size_t i = 1; i < v.size(); ++i) {
    mids.push_back(v[i - 1] + (v[i] - v[i - 1]) / 2.0);
  }
  return mids;
}

struct SingleBranch {
  Direction direction;
  double threshold;
  double gain;
};

// Scans every midpoint and both directions. Assumes at most max_bins
// distinct values, so no quantile thinning applies.
inline std::optional<SingleBranch> BestSingleBranch(
    const Dataset& data, std::span<const std::size_t> rows,
    std::size_t feature, CriterionKind criterion,
    const SplitConstraints& constraints, const GroupCounts& reference) {
  const Counts node = CountAll(data, rows);
  const Counts ref = FromGroupCounts(reference);
  if (node.n_t == 0 || node.n_c == 0 || ref.n_t == 0 || ref.n_c == 0) {
    return std::nullopt;
  }
  const double ref_uplift = Uplift(ref);
  if (criterion == CriterionKind::kLGR && !(ref_uplift > 0.0)) {
    return std::nullopt;
  }
  auto le = [](double v, double t) { return v <= t; };
  auto gt = [](double v, double t) { return v > t; };

  std::optional<SingleBranch> best[2];
  for (double t : Midpoints(data, rows, feature)) {
    for (int d = 0; d < 2; ++d) {
      const Counts k = CountWhere(data, rows, feature, d == 0 ? +le : +gt, t);
      if (k.n_t == 0 || k.n_c == 0) continue;
      const double n_r = k.n_t + k.n_c;
      const double gain = criterion == CriterionKind::kLG
                              ? n_r * (Uplift(k) - ref_uplift)
                              : Uplift(k) / ref_uplift;
      if (n_r < static_cast<double>(constraints.min_samples)) continue;
      if (node.y_t == 0 || k.y_t / node.y_t < constraints.min_recall) continue;
      if (constraints.strict_recall &&
          (node.y_c == 0 || k.y_c / node.y_c < constraints.min_recall)) {
        continue;
      }
      if (gain < constraints.min_delta) continue;
      if (!best[d] || gain > best[d]->gain) {
        best[d] = SingleBranch{d == 0 ? Direction::kLessEqual
                                      : Direction::kGreater,
                               t, gain};
      }
    }
  }
  if (!best[0]) return best[1];
  if (!best[1]) return best[0];
  return best[0]->gain >= best[1]->gain ? best[0] : best[1];
}

struct Binary {
  double threshold;
  double gain;
};

// Every midpoint; both sides need both groups and min_samples rows; gain
// must exceed min_delta. Missing rows are left out of the parent.
inline std::optional<Binary> BestBinary(const Dataset& data,
                                        std::span<const std::size_t> rows,
                                        std::size_t feature,
                                        CriterionKind divergence,
                                        const SplitConstraints& constraints) {
  auto le = [](double v, double t) { return v <= t; };
  auto gt = [](double v, double t) { return v > t; };
  auto to_group = [](const Counts& c) {
    return GroupCounts{static_cast<std::int64_t>(c.n_t),
                       static_cast<std::int64_t>(c.n_c),
                       static_cast<std::int64_t>(c.y_t),
                       static_cast<std::int64_t>(c.y_c)};
  };
  std::optional<Binary> best;
  for (double t : Midpoints(data, rows, feature)) {
    const GroupCounts l = to_group(CountWhere(data, rows, feature, +le, t));
    const GroupCounts r = to_group(CountWhere(data, rows, feature, +gt, t));
    if (!l.has_both_groups() || !r.has_both_groups()) continue;
    if (l.total() < constraints.min_samples ||
        r.total() < constraints.min_samples) {
      continue;
    }
    const double gain = ConditionalGain(divergence, l + r, l, r);
    if (!(gain > constraints.min_delta)) continue;
    if (!best || gain > best->gain) best = Binary{t, gain};
  }
  return best;
}

// f(t) and g(t) for t = 0..N along `order`, recounting each prefix.
inline void PrefixCurves(std::span<const ScoredOutcome> scored,
                         std::span<const std::size_t> order,
                         std::vector<double>* f, std::vector<double>* g) {
  const std::size_t n = order.size();
  f->assign(n + 1, 0.0);
  g->assign(n + 1, 0.0);
  for (std::size_t t = 1; t <= n; ++t) {
    double nt = 0, nc = 0, yt = 0, yc = 0;
    for (std::size_t i = 0; i < t; ++i) {
      const ScoredOutcome& s = scored[order[i]];
      if (s.group == Group::kTreatment) {
        nt += 1;
        yt += s.outcome;
      } else {
        nc += 1;
        yc += s.outcome;
      }
    }
    (*f)[t] = (nt > 0 && nc > 0) ? (yt / nt - yc / nc) * (nt + nc) : 0.0;
    (*g)[t] = nc > 0 ? yt - yc * nt / nc : yt;
  }
}

}  // namespace ciet::oracle

#endif  // CIET_TESTS_ORACLE_H_
