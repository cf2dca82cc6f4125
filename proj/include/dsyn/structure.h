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

// Structure learning: a DAG over attributes found by greedy, K2-style
// parent selection that maximizes a correlation-based feature-selection
// merit (symmetric uncertainty in the numerator, inter-parent redundancy in
// the denominator), subject to a parent-count limit and a cap on the number
// of joint parent configurations.

#ifndef DSYN_STRUCTURE_H_
#define DSYN_STRUCTURE_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dsyn/data_model.h"
#include "dsyn/kv_file.h"
#include "dsyn/random.h"

namespace dsyn {

// Learned DAG. order is a topological order of the parent relation.
struct ParentSets {
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::size_t> order;
  std::vector<double> scores;

  std::size_t num_attributes() const { return parents.size(); }
  // True when `order` is a permutation in which every parent precedes its
  // child.
  bool is_topological() const;
  double total_score() const;

  bool operator==(const ParentSets&) const = default;
};

struct AttributeSearchReport {
  std::vector<std::size_t> parents;
  double merit = 0;
  // Parent sets whose merit was evaluated, counting the empty start set.
  std::size_t candidates_examined = 1;
  bool cap_pruned = false;
  // Merit after each accepted addition, starting with the empty set's 0.
  std::vector<double> trajectory{0.0};
};

struct ScoreReport {
  std::vector<AttributeSearchReport> attributes;
};

// Dense contingency table of two attributes.
class JointCounts {
 public:
  JointCounts() = default;
  JointCounts(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t x, std::size_t y) { return cells_[x * cols_ + y]; }
  double at(std::size_t x, std::size_t y) const {
    return cells_[x * cols_ + y];
  }
  std::span<double> cells() { return cells_; }
  std::span<const double> cells() const { return cells_; }

  double total() const;
  std::vector<double> row_marginals() const;
  std::vector<double> col_marginals() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> cells_;
};

JointCounts joint_counts(const DiscreteTable& data, std::size_t x,
                         std::size_t y);

// Shannon entropy in bits of the normalized histogram.
double entropy(std::span<const double> counts);

// 2 I(X;Y) / (H(X) + H(Y)), or 0 when both entropies vanish.
double symmetric_uncertainty(const JointCounts& joint);

// Adds Laplace(2 / epsilon_s) noise to every cell and clamps at zero.
// epsilon_s = inf leaves the table unchanged.
JointCounts perturb_counts_for_structure(JointCounts joint, double epsilon_s,
                                         Rng& rng);

struct StructureNoise {
  double epsilon_s = kInfinity;
  std::uint64_t seed = 0;
};

// Pairwise symmetric uncertainty plus per-attribute marginal entropy, the
// only statistics the search reads. With noise every pairwise and marginal
// table is perturbed exactly once, each from its own rng stream.
class CorrelationMatrix {
 public:
  static CorrelationMatrix compute(const DiscreteTable& data,
                                   const std::optional<StructureNoise>& noise,
                                   std::size_t workers = 1);

  std::size_t size() const { return entropy_.size(); }
  double su(std::size_t i, std::size_t j) const { return su_[i * size() + j]; }
  double marginal_entropy(std::size_t i) const { return entropy_[i]; }

 private:
  std::vector<double> su_;
  std::vector<double> entropy_;
};

// p * mean_cf / sqrt(p + p (p - 1) * mean_ff); 0 for p = 0.
double cfs_merit(std::size_t p, double mean_cf, double mean_ff);

// CFS merit: p * mean SU(parent, target) / sqrt(p + p (p - 1) * mean SU
// between parent pairs). The empty set scores 0.
double merit_score(std::size_t target, std::span<const std::size_t> parents,
                   const CorrelationMatrix& correlations);
double merit_score(std::size_t target, std::span<const std::size_t> parents,
                   const DiscreteTable& data);

inline constexpr std::uint64_t kComplexityOverCap =
    std::numeric_limits<std::uint64_t>::max();

// Product of the parents' domain sizes; saturates at kComplexityOverCap.
std::uint64_t parent_complexity(std::span<const std::size_t> parents,
                                std::span<const std::size_t> cardinalities);

struct StructureOptions {
  std::size_t max_parents = 3;
  std::uint64_t complexity_cap = 256;
  std::size_t workers = 1;
};

struct StructureResult {
  ParentSets structure;
  ScoreReport report;
};

// Attributes in descending marginal entropy, ties by column index.
std::vector<std::size_t> visitation_order(
    const CorrelationMatrix& correlations);

StructureResult greedy_parent_search(
    const DiscreteTable& data, const StructureOptions& options,
    const std::optional<StructureNoise>& noise = std::nullopt);

void write_structure(const ParentSets& structure, KeyValueFile& doc);
ParentSets read_structure(const KeyValueFile& doc, std::size_t m);

}  // namespace dsyn

#endif  // DSYN_STRUCTURE_H_
