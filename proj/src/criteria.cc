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

#include "ciet/criteria.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "ciet/error.h"

namespace ciet {
namespace {

constexpr double kKlEpsilon = 1e-9;

double Rate(std::int64_t y, std::int64_t n) {
  return static_cast<double>(y) / static_cast<double>(n);
}

// One term p log(p / q) with the 0 log 0 convention.
double KlTerm(double p, double q) {
  if (p <= 0.0) return 0.0;
  return p * std::log(p / q);
}

}  // namespace

std::string_view CriterionName(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::kLG:
      return "LG";
    case CriterionKind::kLGR:
      return "LGR";
    case CriterionKind::kKL:
      return "KL";
    case CriterionKind::kED:
      return "ED";
  }
  return "?";
}

CriterionKind ParseCriterion(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "LG") return CriterionKind::kLG;
  if (upper == "LGR") return CriterionKind::kLGR;
  if (upper == "KL") return CriterionKind::kKL;
  if (upper == "ED" || upper == "EUCLID") return CriterionKind::kED;
  throw ParameterError("unknown criterion '" + std::string(name) + "'");
}

double LiftGain(const SplitContext& ctx) {
  // tau_R - tau_0 with tau_0 evaluated over N_R.
  const double n_r = static_cast<double>(ctx.child.total());
  return n_r * (UpliftRate(ctx.child) - UpliftRate(ctx.parent));
}

double LiftGainRatio(const SplitContext& ctx) {
  const double child_uplift = UpliftRate(ctx.child);
  const double parent_uplift = UpliftRate(ctx.parent);
  if (parent_uplift == 0.0) {
    throw DegenerateDenominatorError(
        "lift gain ratio undefined: parent uplift is zero");
  }
  return child_uplift / parent_uplift;
}

double SingleBranchGain(CriterionKind kind, const SplitContext& ctx) {
  switch (kind) {
    case CriterionKind::kLG:
      return LiftGain(ctx);
    case CriterionKind::kLGR:
      return LiftGainRatio(ctx);
    default:
      throw ParameterError(std::string(CriterionName(kind)) +
                           " is not a single-branch criterion");
  }
}

double KlDivergence(double p_t, double p_c) {
  double q = p_c;
  if (p_t > 0.0 && q <= 0.0) q = kKlEpsilon;
  if (p_t < 1.0 && q >= 1.0) q = 1.0 - kKlEpsilon;
  // Remaining boundary cases (p_t == q == 0 or 1) contribute 0 via KlTerm.
  return KlTerm(p_t, q) + KlTerm(1.0 - p_t, 1.0 - q);
}

double EuclidDivergence(double p_t, double p_c) {
  const double d1 = p_t - p_c;
  const double d0 = (1.0 - p_t) - (1.0 - p_c);
  return d1 * d1 + d0 * d0;
}

double Divergence(CriterionKind kind, double p_t, double p_c) {
  switch (kind) {
    case CriterionKind::kKL:
      return KlDivergence(p_t, p_c);
    case CriterionKind::kED:
      return EuclidDivergence(p_t, p_c);
    default:
      throw ParameterError(std::string(CriterionName(kind)) +
                           " is not a divergence");
  }
}

double ConditionalGain(CriterionKind divergence, const GroupCounts& parent,
                       const GroupCounts& left, const GroupCounts& right) {
  if (left + right != parent) {
    throw IneligibleSplitError("split sides do not sum to the parent counts");
  }
  if (!left.has_both_groups() || !right.has_both_groups()) {
    throw IneligibleSplitError(
        "split side with an empty treatment or control group");
  }
  const double n = static_cast<double>(parent.total());
  double conditional = 0.0;
  for (const GroupCounts* side : {&left, &right}) {
    const double w = static_cast<double>(side->total()) / n;
    conditional += w * Divergence(divergence, Rate(side->y_t, side->n_t),
                                  Rate(side->y_c, side->n_c));
  }
  return conditional - Divergence(divergence, Rate(parent.y_t, parent.n_t),
                                  Rate(parent.y_c, parent.n_c));
}

}  // namespace ciet
