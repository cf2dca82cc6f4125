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

// Seed-based candidate generation.
//
// A candidate starts as a copy of a real seed record. Each attribute is kept
// independently with probability kappa = 1 - omega / m; the others are
// resampled in topological order from p(x_i | parents), reading parent
// values from the partially built candidate. Marginalizing the keep mask gives
// the closed form
//
//   Pr[M(d) = y] = prod_i ( kappa * [d_i == y_i] + (1 - kappa) * p_i(y) )
//
// with p_i(y) = p(y_i | y's parent values). The privacy test evaluates it
// once per dataset record for every candidate.

#ifndef DSYN_SYNTH_H_
#define DSYN_SYNTH_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dsyn/data_model.h"
#include "dsyn/params.h"
#include "dsyn/random.h"
#include "dsyn/structure.h"

namespace dsyn {

enum class TestMode { kDeterministic, kRandomized };

std::string_view test_mode_name(TestMode mode);
TestMode parse_test_mode(std::string_view text);

struct SynthesisConfig {
  double omega = 0;  // expected number of resampled attributes
  std::size_t k = 10;
  double gamma = 4.0;
  double epsilon_0 = kInfinity;  // randomized test budget
  double epsilon_s = kInfinity;
  double epsilon_p = kInfinity;
  std::size_t max_candidates_per_release = 100;
  std::uint64_t rng_seed = 0;
  TestMode test_mode = TestMode::kDeterministic;

  // Checks the ranges against an m-attribute schema.
  void validate(std::size_t m) const;
};

using KeepMask = std::vector<std::uint8_t>;  // 1 = copied from the seed

struct Candidate {
  Record record;
  std::size_t seed_row = 0;
  KeepMask keep_mask;
};

double keep_probability(std::size_t m, double omega);

KeepMask sample_keep_mask(std::size_t m, double omega, Rng& rng);

// Draws an index from a probability row by inversion.
Category sample_category(std::span<const double> row, Rng& rng);

Candidate generate_candidate(std::span<const Category> seed,
                             std::size_t seed_row, const KeepMask& keep_mask,
                             const ParentSets& structure, const CptSet& cpts,
                             Rng& rng);

// p_i(y) for every attribute i.
std::vector<double> resample_probabilities(std::span<const Category> y,
                                           const CptSet& cpts);

double generation_probability(std::span<const Category> y,
                              std::span<const Category> d,
                              std::span<const double> resample_probs,
                              double kappa);

double generation_probability(std::span<const Category> y,
                              std::span<const Category> d, const CptSet& cpts,
                              double omega);

}  // namespace dsyn

#endif  // DSYN_SYNTH_H_
