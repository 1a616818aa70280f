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

#include "ciet/synthgen.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <string>

#include "ciet/error.h"

namespace ciet {
namespace {

constexpr double kGateSlope = 4.0;
constexpr double kGateOffset = 1.0;

// Smooth indicator of s * x > kGateOffset.
double Gate(double s, double x) {
  return 1.0 / (1.0 + std::exp(-kGateSlope * (s * x - kGateOffset)));
}

std::int64_t CountAbove(std::span<const double> z, double c) {
  return std::count_if(z.begin(), z.end(), [c](double v) { return v > c; });
}

// Threshold leaving exactly k of z strictly above it.
double ThresholdForCount(std::vector<double> z, std::int64_t k) {
  std::sort(z.begin(), z.end(), std::greater<>());
  const auto n = static_cast<std::int64_t>(z.size());
  if (k <= 0) return z.front() + 1.0;
  if (k >= n) return z.back() - 1.0;
  return 0.5 * (z[static_cast<std::size_t>(k - 1)] +
                z[static_cast<std::size_t>(k)]);
}

}  // namespace

void SynthSpec::Validate() const {
  if (n_treatment < 1 || n_control < 1) {
    throw ParameterError("both groups need at least one row");
  }
  if (n_informative < 0 || n_irrelevant < 0 || n_uplift < 0 || n_mix < 0) {
    throw ParameterError("feature counts must be >= 0");
  }
  if (!(base_response >= 0.0 && base_response <= 1.0)) {
    throw ParameterError("base_response must lie in [0, 1]");
  }
  if (!(treatment_lift >= 0.0)) {
    throw ParameterError("treatment_lift must be >= 0");
  }
  if (base_response + treatment_lift > 1.0) {
    throw ParameterError("base_response + treatment_lift must be <= 1");
  }
  if (treatment_lift > 0.0 && n_uplift == 0) {
    throw ParameterError("a positive lift needs at least one uplift feature");
  }
  if (n_mix > 0 && (n_informative == 0 || n_uplift == 0)) {
    throw ParameterError(
        "mix features need an informative and an uplift feature");
  }
}

SynthSpec SynthSpec::Preset(std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  return spec;
}

Dataset Generate(const SynthSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto n_t = static_cast<std::size_t>(spec.n_treatment);
  const auto n_c = static_cast<std::size_t>(spec.n_control);
  const std::size_t n = n_t + n_c;

  std::vector<Group> groups(n, Group::kControl);
  std::fill(groups.begin(), groups.begin() + static_cast<std::ptrdiff_t>(n_t),
            Group::kTreatment);
  std::shuffle(groups.begin(), groups.end(), rng);

  std::vector<double> coef(static_cast<std::size_t>(spec.n_informative));
  for (double& a : coef) a = 2.0 * unit(rng) - 1.0;
  std::vector<double> weight(static_cast<std::size_t>(spec.n_uplift));
  std::vector<double> sign(weight.size());
  for (std::size_t j = 0; j < weight.size(); ++j) {
    weight[j] = 0.5 + unit(rng);
    sign[j] = unit(rng) < 0.5 ? -1.0 : 1.0;
  }
  std::vector<std::pair<std::size_t, std::size_t>> mix_sources;
  for (int m = 0; m < spec.n_mix; ++m) {
    std::uniform_int_distribution<std::size_t> pick_inf(
        0, static_cast<std::size_t>(spec.n_informative) - 1);
    std::uniform_int_distribution<std::size_t> pick_upl(
        0, static_cast<std::size_t>(spec.n_uplift) - 1);
    const std::size_t a = pick_inf(rng);
    mix_sources.emplace_back(a, pick_upl(rng));
  }

  auto draw = [&](int count) {
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(count),
                                          std::vector<double>(n));
    for (auto& col : cols) {
      for (double& v : col) v = normal(rng);
    }
    return cols;
  };
  const auto informative = draw(spec.n_informative);
  const auto irrelevant = draw(spec.n_irrelevant);
  const auto uplift = draw(spec.n_uplift);

  std::vector<std::vector<double>> mix;
  for (const auto& [a, b] : mix_sources) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = (informative[a][i] + uplift[b][i]) / std::sqrt(2.0);
    }
    mix.push_back(std::move(col));
  }

  std::vector<double> noise(n);
  for (double& e : noise) {
    const double u = std::clamp(unit(rng), 1e-300, 1.0 - 1e-16);
    e = std::log(u / (1.0 - u));
  }

  std::vector<double> z_control, z_treat, u_treat;
  z_control.reserve(n_c);
  z_treat.reserve(n_t);
  u_treat.reserve(n_t);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = noise[i];
    for (std::size_t k = 0; k < coef.size(); ++k) {
      eta += coef[k] * informative[k][i];
    }
    if (groups[i] == Group::kControl) {
      z_control.push_back(eta);
      continue;
    }
    double u = 0.0;
    for (std::size_t j = 0; j < weight.size(); ++j) {
      u += weight[j] * Gate(sign[j], uplift[j][i]);
    }
    z_treat.push_back(eta);
    u_treat.push_back(u);
  }

  const auto k_c = static_cast<std::int64_t>(
      std::llround(spec.base_response * static_cast<double>(n_c)));
  const auto k_t = static_cast<std::int64_t>(std::llround(
      (spec.base_response + spec.treatment_lift) * static_cast<double>(n_t)));
  const double c = ThresholdForCount(z_control, k_c);

  auto treated_scores = [&](double lambda) {
    std::vector<double> z(n_t);
    for (std::size_t i = 0; i < n_t; ++i) z[i] = z_treat[i] + lambda * u_treat[i];
    return z;
  };
  double lambda = 0.0;
  if (CountAbove(treated_scores(0.0), c) < k_t) {
    double lo = 0.0, hi = 1.0;
    while (CountAbove(treated_scores(hi), c) < k_t) {
      hi *= 2.0;
      if (hi > 1e6) {
        throw ParameterError("treated response rate target is unreachable");
      }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (CountAbove(treated_scores(mid), c) >= k_t ? hi : lo) = mid;
    }
    lambda = hi;
  }

  std::vector<std::uint8_t> outcomes(n);
  for (std::size_t i = 0, ti = 0, ci = 0; i < n; ++i) {
    double z;
    if (groups[i] == Group::kControl) {
      z = z_control[ci++];
    } else {
      z = z_treat[ti] + lambda * u_treat[ti];
      ++ti;
    }
    outcomes[i] = z > c ? 1 : 0;
  }

  std::vector<FeatureSpec> schema;
  std::vector<std::vector<double>> columns;
  int index = 1;
  auto append = [&](const std::vector<std::vector<double>>& cols,
                    const char* role) {
    for (const auto& col : cols) {
      schema.push_back(
          {"x" + std::to_string(index++) + "_" + role, FeatureKind::kNumeric, {}});
      columns.push_back(col);
    }
  };
  append(informative, "informative");
  append(irrelevant, "irrelevant");
  append(uplift, "uplift");
  append(mix, "mix");
  return Dataset(std::move(schema), std::move(columns), std::move(groups),
                 std::move(outcomes));
}

std::vector<Dataset> GenerateSeeds(const SynthSpec& spec,
                                   std::span<const std::uint64_t> seeds) {
  std::vector<Dataset> out(seeds.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      SynthSpec s = spec;
      s.seed = seeds[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = Generate(s);
    } catch (...) {
#pragma omp critical(ciet_generate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace ciet
