// Copyright 2026 The dsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsyn/synth.h"

#include <cmath>

#include "dsyn/error.h"

namespace dsyn {

std::string_view test_mode_name(TestMode mode) {
  return mode == TestMode::kDeterministic ? "deterministic" : "randomized";
}

TestMode parse_test_mode(std::string_view text) {
  if (text == "deterministic") return TestMode::kDeterministic;
  if (text == "randomized") return TestMode::kRandomized;
  fail(ErrorCode::kInvalidArgument,
       "privacy_test must be deterministic or randomized, got '" +
           std::string(text) + "'");
}

void SynthesisConfig::validate(std::size_t m) const {
  require(omega >= 0 && omega <= static_cast<double>(m),
          "omega must lie in [0, " + std::to_string(m) + "]");
  require(k >= 1, "k must be at least 1");
  require(gamma >= 1, "gamma must be at least 1");
  require(epsilon_0 > 0, "epsilon_0 must be positive");
  require(epsilon_s > 0, "epsilon_s must be positive");
  require(epsilon_p > 0, "epsilon_p must be positive");
  require(max_candidates_per_release >= 1,
          "max_candidates_per_release must be positive");
}

double keep_probability(std::size_t m, double omega) {
  require(m > 0, "keep_probability: no attributes");
  require(omega >= 0 && omega <= static_cast<double>(m),
          "omega must lie in [0, " + std::to_string(m) + "]");
  return 1.0 - omega / static_cast<double>(m);
}

KeepMask sample_keep_mask(std::size_t m, double omega, Rng& rng) {
  const double kappa = keep_probability(m, omega);
  KeepMask mask(m);
  for (auto& bit : mask) bit = rng.bernoulli(kappa) ? 1 : 0;
  return mask;
}

Category sample_category(std::span<const double> row, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0;
  std::size_t last_positive = 0;
  for (std::size_t v = 0; v < row.size(); ++v) {
    if (row[v] <= 0) continue;
    last_positive = v;
    cumulative += row[v];
    if (u < cumulative) return static_cast<Category>(v);
  }
  // Rounding left the cumulative sum just below u.
  return static_cast<Category>(last_positive);
}

Candidate generate_candidate(std::span<const Category> seed,
                             std::size_t seed_row, const KeepMask& keep_mask,
                             const ParentSets& structure, const CptSet& cpts,
                             Rng& rng) {
  const std::size_t m = cpts.num_attributes();
  require(
      seed.size() == m && keep_mask.size() == m && structure.order.size() == m,
      "generate_candidate: seed, mask and model disagree on width");
  Candidate out;
  out.seed_row = seed_row;
  out.keep_mask = keep_mask;
  out.record.assign(seed.begin(), seed.end());
  for (std::size_t i : structure.order) {
    if (keep_mask[i]) continue;
    const Cpt& cpt = cpts[i];
    const std::size_t config = cpt.config_index(out.record);
    if (config >= cpt.num_configs()) {
      fail(ErrorCode::kInternal,
           "missing CPT row for attribute " + std::to_string(i));
    }
    out.record[i] = sample_category(cpt.row(config), rng);
  }
  return out;
}

std::vector<double> resample_probabilities(std::span<const Category> y,
                                           const CptSet& cpts) {
  std::vector<double> p(cpts.num_attributes());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = cpts[i].probability(y, i);
  return p;
}

double generation_probability(std::span<const Category> y,
                              std::span<const Category> d,
                              std::span<const double> resample_probs,
                              double kappa) {
  double prob = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double keep = d[i] == y[i] ? kappa : 0.0;
    prob *= keep + (1.0 - kappa) * resample_probs[i];
  }
  return prob;
}

double generation_probability(std::span<const Category> y,
                              std::span<const Category> d, const CptSet& cpts,
                              double omega) {
  require(y.size() == cpts.num_attributes() && d.size() == y.size(),
          "generation_probability: record width mismatch");
  const double kappa = keep_probability(y.size(), omega);
  return generation_probability(y, d, resample_probabilities(y, cpts), kappa);
}

}  // namespace dsyn
