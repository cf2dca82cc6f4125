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

#include "dsyn/params.h"

#include <gtest/gtest.h>

#include "dsyn/error.h"
#include "test_util.h"

namespace dsyn {
namespace {

using testing::categorical_schema;
using testing::empty_structure;

AttributeCounts single(std::vector<double> counts) {
  AttributeCounts a;
  a.cardinality = counts.size();
  a.vectors.push_back({0, {}, std::move(counts)});
  return a;
}

std::vector<double> first_row(const CptSet& set) {
  const auto r = set[0].row(0);
  return {r.begin(), r.end()};
}

TEST(CountVectors, ParentlessTally) {
  const DiscreteTable data(categorical_schema({2}), {{0}, {0}, {1}, {0}});
  const auto counts = count_vectors(data, empty_structure(1));
  ASSERT_EQ(counts[0].vectors.size(), 1u);
  EXPECT_EQ(counts[0].vectors[0].counts, (std::vector<double>{3, 1}));
}

TEST(CountVectors, EmptyTableGivesZeroVectorsForEveryConfig) {
  const DiscreteTable data(categorical_schema({3, 2}), {});
  auto s = empty_structure(2);
  s.parents[1] = {0};
  const auto counts = count_vectors(data, s);
  ASSERT_EQ(counts[1].vectors.size(), 3u);
  for (const auto& v : counts[1].vectors) {
    EXPECT_EQ(v.counts, (std::vector<double>{0, 0}));
  }
}

TEST(CountVectors, MixedRadixOrder) {
  const DiscreteTable data(categorical_schema({2, 3, 2}),
                           {{1, 2, 1}, {1, 2, 0}, {0, 1, 1}});
  auto s = empty_structure(3);
  s.parents[2] = {0, 1};
  const auto counts = count_vectors(data, s);
  ASSERT_EQ(counts[2].vectors.size(), 6u);
  EXPECT_EQ(counts[2].vectors[5].parent_config, (Record{1, 2}));
  EXPECT_EQ(counts[2].vectors[5].counts, (std::vector<double>{1, 1}));
  EXPECT_EQ(counts[2].vectors[1].counts, (std::vector<double>{0, 1}));
}

TEST(Sensitivity, Constants) {
  EXPECT_EQ(count_sensitivity(Adjacency::kAddRemove), 1.0);
  EXPECT_EQ(count_sensitivity(Adjacency::kReplace), 2.0);
  EXPECT_EQ(count_sensitivity(Adjacency::kAddRemove),
            count_sensitivity(Adjacency::kAddRemove));
}

TEST(EstimateCpts, ClosedForms) {
  Rng rng(0);
  const auto even =
      estimate_cpts({single({2, 2})}, 1, kInfinity, Adjacency::kAddRemove, rng);
  EXPECT_EQ(first_row(even), (std::vector<double>{0.5, 0.5}));
  const auto skew =
      estimate_cpts({single({3, 1})}, 1, kInfinity, Adjacency::kAddRemove, rng);
  EXPECT_NEAR(first_row(skew)[0], 4.0 / 6, 1e-15);
  EXPECT_NEAR(first_row(skew)[1], 2.0 / 6, 1e-15);
  const auto unseen =
      estimate_cpts({single({0, 0})}, 1, kInfinity, Adjacency::kAddRemove, rng);
  EXPECT_EQ(first_row(unseen), (std::vector<double>{0.5, 0.5}));
}

TEST(EstimateCpts, NoisyRowsStayNormalized) {
  Rng data_rng(4);
  const auto data = testing::uniform_table({3, 4, 2}, 200, data_rng);
  auto s = empty_structure(3);
  s.parents[1] = {0};
  s.parents[2] = {0, 1};
  const auto counts = count_vectors(data, s);
  for (double eps : {0.1, 1.0, 10.0}) {
    for (auto adj : {Adjacency::kAddRemove, Adjacency::kReplace}) {
      Rng rng(11);
      const auto cpts = estimate_cpts(counts, 0.5, eps, adj, rng);
      for (const auto& t : cpts.tables) {
        for (std::size_t c = 0; c < t.num_configs(); ++c) {
          double sum = 0;
          for (double p : t.row(c)) {
            EXPECT_GE(p, 0.0);
            sum += p;
          }
          EXPECT_NEAR(sum, 1.0, 1e-9);
        }
      }
    }
  }
}

TEST(EstimateCpts, NoiseIsSeedDeterministic) {
  Rng a(5), b(5);
  const auto x =
      estimate_cpts({single({10, 3, 0})}, 1, 0.5, Adjacency::kReplace, a);
  const auto y =
      estimate_cpts({single({10, 3, 0})}, 1, 0.5, Adjacency::kReplace, b);
  EXPECT_EQ(x, y);
}

TEST(Hyperparameter, Floor) {
  EXPECT_EQ(learn_hyperparameter(0, 8), 1.0);
  EXPECT_EQ(learn_hyperparameter(800, 8), 1.0);
  EXPECT_EQ(learn_hyperparameter(8000, 8), 10.0);
}

TEST(Cpt, RejectsUnnormalizedRow) {
  EXPECT_THROW(Cpt({}, {}, 2, {0.5, 0.6}), Error);
  EXPECT_THROW(Cpt({}, {}, 2, {0.5}), Error);
}

TEST(CptFile, RoundTripIsExact) {
  Rng rng(8);
  const auto data = testing::uniform_table({3, 2, 4}, 150, rng);
  auto s = empty_structure(3);
  s.parents[2] = {1, 0};
  const auto cpts = estimate_cpts(count_vectors(data, s), 1.3, 2.0,
                                  Adjacency::kAddRemove, rng);
  KeyValueFile doc;
  write_cpts(cpts, doc);
  const auto back =
      read_cpts(KeyValueFile::parse(doc.to_string()), s, data.schema());
  EXPECT_EQ(back, cpts);
}

}  // namespace
}  // namespace dsyn
