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

#include "ciet/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ciet/error.h"

namespace ciet {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct PrefixCounts {
  double n_t = 0, n_c = 0, y_t = 0, y_c = 0;

  void Add(const ScoredOutcome& s) {
    if (s.group == Group::kTreatment) {
      n_t += 1;
      y_t += s.outcome;
    } else {
      n_c += 1;
      y_c += s.outcome;
    }
  }
  double f() const {
    if (n_t == 0 || n_c == 0) return 0.0;
    return (y_t / n_t - y_c / n_c) * (n_t + n_c);
  }
  double g() const {
    if (n_c == 0) return y_t;
    return y_t - y_c * n_t / n_c;
  }
};

template <typename Statistic>
std::vector<CurvePoint> CurveInOrder(std::span<const ScoredOutcome> scored,
                                     std::span<const std::size_t> order,
                                     Statistic statistic) {
  std::vector<CurvePoint> curve;
  curve.reserve(order.size() + 1);
  curve.push_back({0, 0.0});
  PrefixCounts prefix;
  std::int64_t t = 0;
  for (std::size_t i : order) {
    prefix.Add(scored[i]);
    curve.push_back({++t, statistic(prefix)});
  }
  return curve;
}

double Trapezoid(std::span<const double> values) {
  double area = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    area += 0.5 * (values[i - 1] + values[i]);
  }
  return area;
}

double ValueAt(std::span<const CurvePoint> curve, double t) {
  auto it = std::lower_bound(
      curve.begin(), curve.end(), t,
      [](const CurvePoint& p, double x) { return static_cast<double>(p.t) < x; });
  if (it == curve.end()) return curve.back().value;
  if (static_cast<double>(it->t) == t || it == curve.begin()) return it->value;
  const CurvePoint& hi = *it;
  const CurvePoint& lo = *(it - 1);
  const double w = (t - static_cast<double>(lo.t)) /
                   static_cast<double>(hi.t - lo.t);
  return lo.value + w * (hi.value - lo.value);
}

std::vector<CurvePoint> ToPoints(std::span<const double> values) {
  std::vector<CurvePoint> pts(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    pts[t] = {static_cast<std::int64_t>(t), values[t]};
  }
  return pts;
}

}  // namespace

std::vector<std::size_t> RankOrder(std::span<const ScoredOutcome> scored,
                                   std::uint64_t tie_seed) {
  std::vector<std::uint64_t> keys(scored.size());
  const std::uint64_t salt = SplitMix64(tie_seed);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    keys[i] = SplitMix64(salt ^ (static_cast<std::uint64_t>(i) *
                                 0xD1B54A32D192ED03ULL));
  }
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a].score != scored[b].score) {
      return scored[a].score > scored[b].score;
    }
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return a < b;
  });
  return order;
}

std::vector<CurvePoint> UpliftCurve(std::span<const ScoredOutcome> scored,
                                    std::uint64_t tie_seed) {
  const auto order = RankOrder(scored, tie_seed);
  return CurveInOrder(scored, order,
                      [](const PrefixCounts& p) { return p.f(); });
}

std::vector<CurvePoint> QiniCurve(std::span<const ScoredOutcome> scored,
                                  std::uint64_t tie_seed) {
  const auto order = RankOrder(scored, tie_seed);
  return CurveInOrder(scored, order,
                      [](const PrefixCounts& p) { return p.g(); });
}

std::vector<CurvePoint> OptimalQiniCurve(
    std::span<const ScoredOutcome> scored) {
  // 3: treated responder, 2: control non-responder, 1: treated
  // non-responder, 0: control responder.
  std::vector<ScoredOutcome> oracle(scored.begin(), scored.end());
  for (ScoredOutcome& s : oracle) {
    s.score = s.group == Group::kTreatment ? (s.outcome ? 3.0 : 1.0)
                                           : (s.outcome ? 0.0 : 2.0);
  }
  return QiniCurve(oracle, 0);
}

double Auuc(std::span<const CurvePoint> curve) {
  if (curve.size() < 2) return 0.0;
  const double n = static_cast<double>(curve.back().t - curve.front().t);
  if (n <= 0) return 0.0;
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += 0.5 * (curve[i - 1].value + curve[i].value) *
            static_cast<double>(curve[i].t - curve[i - 1].t);
  }
  return area / n;
}

double AuucBinned(std::span<const CurvePoint> curve, int bins) {
  if (bins < 1) throw ParameterError("bins must be >= 1");
  if (curve.size() < 2) return 0.0;
  const double n = static_cast<double>(curve.back().t);
  double area = 0.0;
  double prev = ValueAt(curve, 0.0);
  for (int k = 1; k <= bins; ++k) {
    const double t = std::round(static_cast<double>(k) * n / bins);
    const double v = ValueAt(curve, t);
    area += 0.5 * (prev + v) / bins;
    prev = v;
  }
  return area;
}

double QiniCoefficientFromCurve(std::span<const double> g,
                                std::span<const double> optimal_g) {
  if (g.size() < 2 || g.size() != optimal_g.size()) {
    throw UndefinedCoefficientError("Qini curve needs at least one point");
  }
  const double n = static_cast<double>(g.size() - 1);
  const double area_model = Trapezoid(g) / n;
  const double area_random = 0.5 * g.back();
  const double area_optimal = Trapezoid(optimal_g) / n;
  const double denom = area_optimal - area_random;
  if (!(std::abs(denom) > 1e-12 * std::max(1.0, std::abs(area_optimal)))) {
    throw UndefinedCoefficientError(
        "Qini coefficient undefined: optimal curve equals random targeting");
  }
  return (area_model - area_random) / denom;
}

double QiniCoefficient(std::span<const ScoredOutcome> scored,
                       std::uint64_t tie_seed) {
  std::vector<double> g, opt;
  for (const CurvePoint& p : QiniCurve(scored, tie_seed)) g.push_back(p.value);
  for (const CurvePoint& p : OptimalQiniCurve(scored)) opt.push_back(p.value);
  return QiniCoefficientFromCurve(g, opt);
}

UpliftEvaluation Evaluate(std::span<const ScoredOutcome> scored,
                          const EvalOptions& options) {
  if (options.tie_seeds < 1) throw ParameterError("tie_seeds must be >= 1");
  UpliftEvaluation eval;
  const std::size_t n = scored.size();
  eval.n = static_cast<std::int64_t>(n);
  eval.f.assign(n + 1, 0.0);
  eval.g.assign(n + 1, 0.0);
  for (int s = 0; s < options.tie_seeds; ++s) {
    const auto order =
        RankOrder(scored, options.seed + static_cast<std::uint64_t>(s));
    PrefixCounts prefix;
    for (std::size_t t = 0; t < n; ++t) {
      prefix.Add(scored[order[t]]);
      eval.f[t + 1] += prefix.f();
      eval.g[t + 1] += prefix.g();
    }
  }
  const double inv = 1.0 / options.tie_seeds;
  for (std::size_t t = 0; t <= n; ++t) {
    eval.f[t] *= inv;
    eval.g[t] *= inv;
  }
  // The endpoint does not depend on the ranking; keep it exact.
  PrefixCounts all;
  for (const ScoredOutcome& s : scored) all.Add(s);
  eval.f[n] = all.f();
  eval.g[n] = all.g();
  eval.random_f.resize(n + 1);
  for (std::size_t t = 0; t <= n; ++t) {
    eval.random_f[t] =
        n == 0 ? 0.0
               : eval.f[n] * (static_cast<double>(t) / static_cast<double>(n));
  }
  for (const CurvePoint& p : OptimalQiniCurve(scored)) {
    eval.optimal_g.push_back(p.value);
  }
  const auto f_points = ToPoints(eval.f);
  eval.auuc = AuucBinned(f_points, options.bins);
  eval.auuc_exact = Auuc(f_points);
  eval.auuc_normalized = n == 0 ? 0.0 : eval.auuc_exact / static_cast<double>(n);
  eval.qini = QiniCoefficientFromCurve(eval.g, eval.optimal_g);
  return eval;
}

}  // namespace ciet
