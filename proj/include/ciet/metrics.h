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

// Uplift and Qini curves over observations ranked by predicted uplift.
//
// For the top t observations:
//   f(t) = (Y_t^T / N_t^T - Y_t^C / N_t^C) (N_t^T + N_t^C)
//   g(t) = Y_t^T - Y_t^C N_t^T / N_t^C
// f is 0 while a group is still empty; g is Y_t^T while N_t^C = 0.
//
// Ranking is by descending score. Tied scores are ordered by a pseudo-random
// permutation drawn from `tie_seed`, so results depend only on the order of
// the scores and the seed.

#ifndef CIET_METRICS_H_
#define CIET_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ciet/data.h"

namespace ciet {

struct ScoredOutcome {
  double score = 0.0;
  Group group = Group::kControl;
  int outcome = 0;
};

struct CurvePoint {
  std::int64_t t = 0;
  double value = 0.0;
};

// Indices of `scored` in ranking order.
std::vector<std::size_t> RankOrder(std::span<const ScoredOutcome> scored,
                                   std::uint64_t tie_seed);

// Points t = 0..N, starting at (0, 0).
std::vector<CurvePoint> UpliftCurve(std::span<const ScoredOutcome> scored,
                                    std::uint64_t tie_seed = 0);
std::vector<CurvePoint> QiniCurve(std::span<const ScoredOutcome> scored,
                                  std::uint64_t tie_seed = 0);

// Qini curve of the best possible ranking: treated responders, control
// non-responders, treated non-responders, control responders.
std::vector<CurvePoint> OptimalQiniCurve(std::span<const ScoredOutcome> scored);

// Trapezoidal area over t divided by N (the curve's mean height).
double Auuc(std::span<const CurvePoint> curve);

// Trapezoidal area on the population-fraction axis using the curve sampled
// at t_k = round(k N / bins), k = 0..bins.
double AuucBinned(std::span<const CurvePoint> curve, int bins = 100);

// (A_qini - A_random) / (A_optimal - A_random), areas as in Auuc, random
// being the straight line from (0, 0) to (N, g(N)). Throws
// UndefinedCoefficientError when A_optimal == A_random.
double QiniCoefficient(std::span<const ScoredOutcome> scored,
                       std::uint64_t tie_seed = 0);

struct EvalOptions {
  // Number of tie permutations averaged.
  int tie_seeds = 11;
  std::uint64_t seed = 0;
  int bins = 100;
};

// Curves averaged over the tie permutations, plus summary metrics computed
// from those averaged curves.
struct UpliftEvaluation {
  std::int64_t n = 0;
  std::vector<double> f;
  std::vector<double> g;
  std::vector<double> random_f;
  std::vector<double> optimal_g;
  // AuucBinned on the mean curve.
  double auuc = 0.0;
  // Auuc on the mean curve.
  double auuc_exact = 0.0;
  // auuc_exact / N: the area with both axes scaled to [0, 1].
  double auuc_normalized = 0.0;
  double qini = 0.0;
};

UpliftEvaluation Evaluate(std::span<const ScoredOutcome> scored,
                          const EvalOptions& options = {});

// Qini coefficient of a mean curve, with optimal and random areas taken from
// `scored` (both are ranking-independent).
double QiniCoefficientFromCurve(std::span<const double> g,
                                std::span<const double> optimal_g);

}  // namespace ciet

#endif  // CIET_METRICS_H_
