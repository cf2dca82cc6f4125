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

// Parameter learning: conditional probability tables from count vectors with
// symmetric Dirichlet smoothing and optional Laplace noise on the counts.

#ifndef DSYN_PARAMS_H_
#define DSYN_PARAMS_H_

#include <span>
#include <string_view>
#include <vector>

#include "dsyn/data_model.h"
#include "dsyn/kv_file.h"
#include "dsyn/random.h"
#include "dsyn/structure.h"

namespace dsyn {

enum class Adjacency { kAddRemove, kReplace };

std::string_view adjacency_name(Adjacency adjacency);
Adjacency parse_adjacency(std::string_view text);

// Counts of each target value among rows matching one parent configuration.
struct CountVector {
  std::size_t target = 0;
  std::vector<Category> parent_config;
  std::vector<double> counts;
};

// Every configuration of one attribute's parents, in mixed-radix order with
// the first parent most significant.
struct AttributeCounts {
  std::size_t target = 0;
  std::size_t cardinality = 0;
  std::vector<std::size_t> parents;
  std::vector<std::size_t> parent_cardinalities;
  std::vector<CountVector> vectors;
};

std::vector<AttributeCounts> count_vectors(const DiscreteTable& data,
                                           const ParentSets& structure);

// L1 sensitivity of one attribute's count family to one record.
double count_sensitivity(Adjacency adjacency);

// p(attribute | parents) for every parent configuration.
class Cpt {
 public:
  Cpt() = default;
  Cpt(std::vector<std::size_t> parents,
      std::vector<std::size_t> parent_cardinalities, std::size_t cardinality,
      std::vector<double> probabilities);

  const std::vector<std::size_t>& parents() const { return parents_; }
  const std::vector<std::size_t>& parent_cardinalities() const {
    return parent_cardinalities_;
  }
  std::size_t cardinality() const { return cardinality_; }
  std::size_t num_configs() const { return num_configs_; }

  // Configuration index of the parent values found in `record`.
  std::size_t config_index(std::span<const Category> record) const;
  std::span<const double> row(std::size_t config) const {
    return {probabilities_.data() + config * cardinality_, cardinality_};
  }
  // p(record[target] | record[parents]).
  double probability(std::span<const Category> record,
                     std::size_t target) const {
    return row(config_index(record))[record[target]];
  }
  const std::vector<double>& probabilities() const { return probabilities_; }

  bool operator==(const Cpt&) const = default;

 private:
  std::vector<std::size_t> parents_;
  std::vector<std::size_t> parent_cardinalities_;
  std::size_t cardinality_ = 0;
  std::size_t num_configs_ = 0;
  std::vector<double> probabilities_;
};

struct CptSet {
  std::vector<Cpt> tables;
  double alpha = 1.0;
  double epsilon_p = kInfinity;
  Adjacency adjacency = Adjacency::kAddRemove;

  std::size_t num_attributes() const { return tables.size(); }
  const Cpt& operator[](std::size_t i) const { return tables[i]; }

  bool operator==(const CptSet&) const = default;
};

// Splits epsilon_p evenly over the attributes, adds Laplace(sensitivity * m
// / epsilon_p) to every count (skipped for epsilon_p = inf), clamps at 0 and
// smooths each row as (n_v + alpha) / (sum_u n_u + alpha * |domain|).
CptSet estimate_cpts(const std::vector<AttributeCounts>& counts, double alpha,
                     double epsilon_p, Adjacency adjacency, Rng& rng);

// max(1, rows / (100 m)).
double learn_hyperparameter(std::size_t rows, std::size_t num_attributes);

void write_cpts(const CptSet& cpts, KeyValueFile& doc);
CptSet read_cpts(const KeyValueFile& doc, const ParentSets& structure,
                 const Schema& schema);

}  // namespace dsyn

#endif  // DSYN_PARAMS_H_
