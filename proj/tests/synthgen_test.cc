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

#include <cmath>
#include <vector>

#include "ciet/error.h"
#include "ciet/split_search.h"
#include "ciet/synthgen.h"
#include "gtest/gtest.h"

namespace ciet {
namespace {

double Correlation(std::span<const double> x, const Dataset& d) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double y = d.outcome(i);
    sx += x[i];
    sy += y;
    sxx += x[i] * x[i];
    syy += y * y;
    sxy += x[i] * y;
  }
  const double cov = sxy / n - sx / n * sy / n;
  return cov / std::sqrt((sxx / n - sx / n * sx / n) * (syy / n - sy / n * sy / n));
}

TEST(Generate, PresetShape) {
  const Dataset d = Generate(SynthSpec::Preset(7));
  EXPECT_EQ(d.num_rows(), 6000u);
  ASSERT_EQ(d.num_features(), 11u);
  EXPECT_EQ(d.feature(0).name, "x1_informative");
  EXPECT_EQ(d.feature(5).name, "x6_informative");
  EXPECT_EQ(d.feature(6).name, "x7_irrelevant");
  EXPECT_EQ(d.feature(8).name, "x9_uplift");
  EXPECT_EQ(d.feature(10).name, "x11_mix");
  const GroupCounts c = CountGroups(d);
  EXPECT_EQ(c.n_t, 3000);
  EXPECT_EQ(c.n_c, 3000);
  // The calibration hits the targets exactly.
  EXPECT_EQ(c.y_c, 1500);
  EXPECT_EQ(c.y_t, 1800);
}

TEST(Generate, GroupsAreInterleaved) {
  const Dataset d = Generate(SynthSpec::Preset(1));
  int switches = 0;
  for (std::size_t r = 1; r < d.num_rows(); ++r) {
    switches += d.group(r) != d.group(r - 1);
  }
  EXPECT_GT(switches, 2000);
}

TEST(Generate, Deterministic) {
  const Dataset a = Generate(SynthSpec::Preset(3));
  const Dataset b = Generate(SynthSpec::Preset(3));
  const Dataset c = Generate(SynthSpec::Preset(4));
  ASSERT_EQ(a.num_rows(), b.num_rows());
  bool same_as_other = true;
  for (std::size_t f = 0; f < a.num_features(); ++f) {
    const auto ca = a.column(f);
    const auto cb = b.column(f);
    EXPECT_TRUE(std::equal(ca.begin(), ca.end(), cb.begin()));
    const auto cc = c.column(f);
    same_as_other &= std::equal(ca.begin(), ca.end(), cc.begin());
  }
  EXPECT_FALSE(same_as_other);
}

TEST(Generate, ZeroLiftGivesEqualRates) {
  SynthSpec s;
  s.treatment_lift = 0.0;
  s.n_uplift = 0;
  s.n_mix = 0;
  const GroupCounts c = CountGroups(Generate(s));
  // Only the control rate is calibrated; the treated rate is left to
  // sampling noise (difference SE is about 0.013 at 3000 rows per group).
  EXPECT_EQ(c.y_c, 1500);
  EXPECT_NEAR(static_cast<double>(c.y_t - c.y_c) / 3000.0, 0.0, 0.05);
}

TEST(Generate, IrrelevantFeaturesCarryNoSignal) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = Generate(SynthSpec::Preset(seed));
    EXPECT_LT(std::abs(Correlation(d.column(6), d)), 0.05);
    EXPECT_LT(std::abs(Correlation(d.column(7), d)), 0.05);
  }
}

TEST(Generate, UpliftFeaturesYieldPositiveLiftGain) {
  int positive = 0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    const Dataset d = Generate(SynthSpec::Preset(static_cast<std::uint64_t>(seed)));
    double best = 0.0;
    for (std::size_t f : {8u, 9u}) {
      const auto split = BestSplitForFeature(d, d.AllRows(), f,
                                             CriterionKind::kLG, {});
      if (split) best = std::max(best, split->gain);
    }
    positive += best > 0.0;
  }
  EXPECT_GE(positive, 19);
}

TEST(GenerateSeeds, MatchesSequentialGeneration) {
  const std::vector<std::uint64_t> seeds = {5, 6, 7};
  SynthSpec s;
  s.n_treatment = 500;
  s.n_control = 400;
  const auto all = GenerateSeeds(s, seeds);
  ASSERT_EQ(all.size(), 3u);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    SynthSpec one = s;
    one.seed = seeds[i];
    const Dataset d = Generate(one);
    const auto a = all[i].column(0);
    const auto b = d.column(0);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST(SynthSpec, Validate) {
  auto bad = [](auto mutate) {
    SynthSpec s;
    mutate(s);
    return s;
  };
  EXPECT_THROW(Generate(bad([](SynthSpec& s) { s.n_treatment = 0; })),
               ParameterError);
  EXPECT_THROW(Generate(bad([](SynthSpec& s) { s.n_control = -1; })),
               ParameterError);
  EXPECT_THROW(Generate(bad([](SynthSpec& s) { s.base_response = 1.2; })),
               ParameterError);
  EXPECT_THROW(Generate(bad([](SynthSpec& s) { s.treatment_lift = -0.1; })),
               ParameterError);
  EXPECT_THROW(Generate(bad([](SynthSpec& s) { s.base_response = 0.95; })),
               ParameterError);
  EXPECT_THROW(Generate(bad([](SynthSpec& s) {
                 s.n_uplift = 0;
                 s.n_mix = 0;
               })),
               ParameterError);
  EXPECT_THROW(Generate(bad([](SynthSpec& s) { s.n_irrelevant = -1; })),
               ParameterError);
}

}  // namespace
}  // namespace ciet
