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

#include <gtest/gtest.h>

#include <cmath>

#include "dsyn/error.h"
#include "dsyn/privacy.h"
#include "test_util.h"

namespace dsyn {
namespace {

using testing::categorical_schema;
using testing::empty_structure;
using testing::enumerate_generation_probability;

TEST(KeepMask, Extremes) {
  Rng rng(1);
  EXPECT_EQ(keep_probability(6, 0), 1.0);
  EXPECT_EQ(keep_probability(6, 6), 0.0);
  EXPECT_EQ(sample_keep_mask(6, 0, rng), KeepMask(6, 1));
  EXPECT_EQ(sample_keep_mask(6, 6, rng), KeepMask(6, 0));
}

TEST(KeepMask, MeanKeptFraction) {
  Rng rng(2);
  const std::size_t m = 10;
  std::size_t kept = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    for (auto b : sample_keep_mask(m, m / 2.0, rng)) kept += b;
  }
  EXPECT_NEAR(static_cast<double>(kept) / (draws * m), 0.5, 0.01);
}

CptSet one_hot_cpts(const std::vector<std::size_t>& cards, const Record& hot) {
  CptSet set;
  for (std::size_t i = 0; i < cards.size(); ++i) {
    std::vector<double> row(cards[i], 0.0);
    row[hot[i]] = 1.0;
    set.tables.emplace_back(std::vector<std::size_t>{},
                            std::vector<std::size_t>{}, cards[i], row);
  }
  return set;
}

TEST(GenerateCandidate, KeepAllCopiesSeed) {
  Rng rng(3);
  const std::vector<std::size_t> cards = {3, 2, 4};
  const auto s = testing::random_structure(3, 2, rng);
  const auto cpts = testing::random_cpts(s, cards, rng);
  const Record seed = {2, 1, 3};
  const auto c = generate_candidate(seed, 0, KeepMask(3, 1), s, cpts, rng);
  EXPECT_EQ(c.record, seed);
}

TEST(GenerateCandidate, OneHotIgnoresSeed) {
  Rng rng(4);
  const std::vector<std::size_t> cards = {3, 2, 4};
  const Record hot = {1, 0, 2};
  const auto cpts = one_hot_cpts(cards, hot);
  for (const Record& seed : {Record{0, 1, 0}, Record{2, 1, 3}}) {
    const auto c = generate_candidate(seed, 0, KeepMask(3, 0),
                                      empty_structure(3), cpts, rng);
    EXPECT_EQ(c.record, hot);
  }
}

TEST(GenerateCandidate, SeedDeterminism) {
  Rng setup(5);
  const std::vector<std::size_t> cards = {3, 3, 3, 3};
  const auto s = testing::random_structure(4, 2, setup);
  const auto cpts = testing::random_cpts(s, cards, setup);
  Rng a(6), b(6);
  for (int i = 0; i < 50; ++i) {
    const KeepMask mask = sample_keep_mask(4, 2, a);
    const KeepMask mask_b = sample_keep_mask(4, 2, b);
    EXPECT_EQ(
        generate_candidate(Record{0, 1, 2, 0}, 0, mask, s, cpts, a).record,
        generate_candidate(Record{0, 1, 2, 0}, 0, mask_b, s, cpts, b).record);
  }
}

TEST(GenerationProbability, TwoAttributeExample) {
  const Record y = {0, 0};
  const std::vector<double> p = {0.5, 0.25};
  // masks: none kept, first kept, second kept, both kept
  const double oracle = (0.5 * 0.25 + 0.25 + 0.5 + 1.0) / 4;
  EXPECT_NEAR(oracle, 0.46875, 1e-15);
  EXPECT_NEAR(generation_probability(y, y, p, 0.5), oracle, 1e-15);
}

TEST(GenerationProbability, Collapses) {
  Rng rng(7);
  const std::vector<std::size_t> cards = {2, 3, 2};
  const auto s = testing::random_structure(3, 2, rng);
  const auto cpts = testing::random_cpts(s, cards, rng);
  const Record y = {1, 2, 0};
  const Record d = {0, 2, 1};
  const auto p = resample_probabilities(y, cpts);
  EXPECT_NEAR(generation_probability(y, d, cpts, 3), p[0] * p[1] * p[2], 1e-15);
  EXPECT_EQ(generation_probability(y, d, cpts, 0), 0.0);
  EXPECT_EQ(generation_probability(y, y, cpts, 0), 1.0);
}

TEST(GenerationProbability, MatchesMaskEnumeration) {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng.uniform_index(6);
    std::vector<std::size_t> cards;
    for (std::size_t j = 0; j < m; ++j)
      cards.push_back(2 + rng.uniform_index(3));
    const auto s = testing::random_structure(m, 2, rng);
    const auto cpts = testing::random_cpts(s, cards, rng);
    Record y(m), d(m);
    for (std::size_t j = 0; j < m; ++j) {
      y[j] = static_cast<Category>(rng.uniform_index(cards[j]));
      d[j] = rng.bernoulli(0.6)
                 ? y[j]
                 : static_cast<Category>(rng.uniform_index(cards[j]));
    }
    const double omega = rng.uniform() * static_cast<double>(m);
    EXPECT_NEAR(generation_probability(y, d, cpts, omega),
                enumerate_generation_probability(y, d, cpts,
                                                 keep_probability(m, omega)),
                1e-12);
  }
}

TEST(SynthesisConfig, Validation) {
  SynthesisConfig c;
  c.omega = 2;
  EXPECT_NO_THROW(c.validate(4));
  c.omega = 5;
  EXPECT_THROW(c.validate(4), Error);
  c.omega = 1;
  c.k = 0;
  EXPECT_THROW(c.validate(4), Error);
  c.k = 1;
  c.gamma = 0.5;
  EXPECT_THROW(c.validate(4), Error);
}

}  // namespace
}  // namespace dsyn
