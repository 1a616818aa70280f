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

// Parallel kernels against their serial references.

#include <cstdint>

#include "benchmark/benchmark.h"
#include "ciet/baseline_tree.h"
#include "ciet/ensemble.h"
#include "ciet/split_search.h"
#include "ciet/synthgen.h"

namespace ciet {
namespace {

const Dataset& Data(std::int64_t rows) {
  static std::vector<std::pair<std::int64_t, Dataset>> cache;
  for (const auto& [n, d] : cache) {
    if (n == rows) return d;
  }
  SynthSpec spec;
  spec.n_treatment = rows / 2;
  spec.n_control = rows - rows / 2;
  spec.n_irrelevant = 20;
  cache.emplace_back(rows, Generate(spec));
  return cache.back().second;
}

SplitConstraints Defaults() { return SplitConstraints{}; }

void BM_BestSplit(benchmark::State& state) {
  const Dataset& d = Data(state.range(0));
  const RowSet rows = d.AllRows();
  const GroupCounts ref = CountGroups(d, rows);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        BestSplit(d, rows, CriterionKind::kLG, Defaults(), ref));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BestSplitSerial(benchmark::State& state) {
  const Dataset& d = Data(state.range(0));
  const RowSet rows = d.AllRows();
  const GroupCounts ref = CountGroups(d, rows);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        serial::BestSplit(d, rows, CriterionKind::kLG, Defaults(), ref));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BestBinarySplit(benchmark::State& state) {
  const Dataset& d = Data(state.range(0));
  const RowSet rows = d.AllRows();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        BestBinarySplit(d, rows, CriterionKind::kKL, Defaults()));
  }
}

void BM_BestBinarySplitSerial(benchmark::State& state) {
  const Dataset& d = Data(state.range(0));
  const RowSet rows = d.AllRows();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        serial::BestBinarySplit(d, rows, CriterionKind::kKL, Defaults()));
  }
}

void BM_ScoreRows(benchmark::State& state) {
  const Dataset& d = Data(state.range(0));
  const RuleSetModel model = LearnRuleSet(d, TreeConfig{}, 3);
  const RowSet rows = d.AllRows();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScoreRows(model, d, rows));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ScoreRowsSerial(benchmark::State& state) {
  const Dataset& d = Data(state.range(0));
  const RuleSetModel model = LearnRuleSet(d, TreeConfig{}, 3);
  const RowSet rows = d.AllRows();
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::ScoreRows(model, d, rows));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_BestSplit)->Arg(6000)->Arg(60000);
BENCHMARK(BM_BestSplitSerial)->Arg(6000)->Arg(60000);
BENCHMARK(BM_BestBinarySplit)->Arg(6000)->Arg(60000);
BENCHMARK(BM_BestBinarySplitSerial)->Arg(6000)->Arg(60000);
BENCHMARK(BM_ScoreRows)->Arg(6000)->Arg(60000);
BENCHMARK(BM_ScoreRowsSerial)->Arg(6000)->Arg(60000);

}  // namespace
}  // namespace ciet

BENCHMARK_MAIN();
