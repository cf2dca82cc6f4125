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

#include "dsyn/structure.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dsyn/error.h"
#include "dsyn/parallel.h"

namespace dsyn {
namespace {

// An addition must raise the merit by more than this to be accepted.
constexpr double kMinImprovement = 1e-9;

double entropy_unchecked(std::span<const double> counts) {
  double total = 0;
  for (double c : counts) total += c;
  if (total <= 0) return 0;
  double h = 0;
  for (double c : counts) {
    if (c > 0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return std::max(0.0, h);
}

double su_unchecked(const JointCounts& joint) {
  if (joint.total() <= 0) return 0;
  const double hx = entropy_unchecked(joint.row_marginals());
  const double hy = entropy_unchecked(joint.col_marginals());
  if (hx + hy <= 0) return 0;
  const double hxy = entropy_unchecked(joint.cells());
  const double mutual = hx + hy - hxy;
  return std::clamp(2.0 * mutual / (hx + hy), 0.0, 1.0);
}

template <typename SuFn>
double merit_from(std::size_t target, std::span<const std::size_t> parents,
                  SuFn&& su) {
  const std::size_t p = parents.size();
  if (p == 0) return 0;
  for (std::size_t q : parents) {
    require(q != target, "merit_score: target " + std::to_string(target) +
                             " is in its own parent set");
  }
  double rcf = 0;
  for (std::size_t q : parents) rcf += su(q, target);
  rcf /= static_cast<double>(p);
  double rff = 0;
  if (p >= 2) {
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = a + 1; b < p; ++b) rff += su(parents[a], parents[b]);
    }
    rff /= static_cast<double>(p * (p - 1) / 2);
  }
  return cfs_merit(p, rcf, rff);
}

}  // namespace

double cfs_merit(std::size_t p, double mean_cf, double mean_ff) {
  if (p == 0) return 0;
  const double pd = static_cast<double>(p);
  return pd * mean_cf / std::sqrt(pd + pd * (pd - 1) * mean_ff);
}

bool ParentSets::is_topological() const {
  const std::size_t m = parents.size();
  if (order.size() != m) return false;
  std::vector<std::size_t> position(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (order[i] >= m || position[order[i]] != m) return false;
    position[order[i]] = i;
  }
  for (std::size_t child = 0; child < m; ++child) {
    for (std::size_t parent : parents[child]) {
      if (parent >= m || position[parent] >= position[child]) return false;
    }
  }
  return true;
}

double ParentSets::total_score() const {
  return std::accumulate(scores.begin(), scores.end(), 0.0);
}

double JointCounts::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), 0.0);
}

std::vector<double> JointCounts::row_marginals() const {
  std::vector<double> out(rows_, 0.0);
  for (std::size_t x = 0; x < rows_; ++x) {
    for (std::size_t y = 0; y < cols_; ++y) out[x] += at(x, y);
  }
  return out;
}

std::vector<double> JointCounts::col_marginals() const {
  std::vector<double> out(cols_, 0.0);
  for (std::size_t x = 0; x < rows_; ++x) {
    for (std::size_t y = 0; y < cols_; ++y) out[y] += at(x, y);
  }
  return out;
}

JointCounts joint_counts(const DiscreteTable& data, std::size_t x,
                         std::size_t y) {
  const auto& schema = data.schema();
  JointCounts joint(schema[x].cardinality(), schema[y].cardinality());
  for (const auto& row : data.rows()) joint.at(row[x], row[y]) += 1.0;
  return joint;
}

double entropy(std::span<const double> counts) {
  double total = 0;
  for (double c : counts) {
    require(c >= 0, "entropy: negative count");
    total += c;
  }
  require(total > 0, "entropy: histogram has no positive count");
  return entropy_unchecked(counts);
}

double symmetric_uncertainty(const JointCounts& joint) {
  require(joint.rows() > 0 && joint.cols() > 0 && joint.total() > 0,
          "symmetric_uncertainty: empty joint table");
  return su_unchecked(joint);
}

JointCounts perturb_counts_for_structure(JointCounts joint, double epsilon_s,
                                         Rng& rng) {
  require(epsilon_s > 0, "epsilon_s must be positive");
  if (std::isinf(epsilon_s)) return joint;
  const double scale = 2.0 / epsilon_s;
  for (double& c : joint.cells()) c = std::max(0.0, c + rng.laplace(scale));
  return joint;
}

CorrelationMatrix CorrelationMatrix::compute(
    const DiscreteTable& data, const std::optional<StructureNoise>& noise,
    std::size_t workers) {
  const std::size_t m = data.num_attributes();
  if (noise) require(noise->epsilon_s > 0, "epsilon_s must be positive");
  CorrelationMatrix out;
  out.su_.assign(m * m, 0.0);
  out.entropy_.assign(m, 0.0);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  }
  const std::size_t marginal_stream = pairs.size();

  parallel_for(pairs.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto [i, j] = pairs[p];
      JointCounts joint = joint_counts(data, i, j);
      if (noise) {
        Rng rng = Rng::stream(noise->seed, p);
        joint = perturb_counts_for_structure(std::move(joint), noise->epsilon_s,
                                             rng);
      }
      const double su = su_unchecked(joint);
      out.su_[i * m + j] = su;
      out.su_[j * m + i] = su;
    }
  });
  for (std::size_t i = 0; i < m; ++i) {
    out.su_[i * m + i] = 1.0;
    JointCounts marginal(data.schema()[i].cardinality(), 1);
    const auto counts = data.marginal_counts(i);
    std::copy(counts.begin(), counts.end(), marginal.cells().begin());
    if (noise) {
      Rng rng = Rng::stream(noise->seed, marginal_stream + i);
      marginal = perturb_counts_for_structure(std::move(marginal),
                                              noise->epsilon_s, rng);
    }
    out.entropy_[i] = entropy_unchecked(marginal.cells());
  }
  return out;
}

double merit_score(std::size_t target, std::span<const std::size_t> parents,
                   const CorrelationMatrix& correlations) {
  return merit_from(target, parents, [&](std::size_t a, std::size_t b) {
    return correlations.su(a, b);
  });
}

double merit_score(std::size_t target, std::span<const std::size_t> parents,
                   const DiscreteTable& data) {
  require(!data.empty(), "merit_score: empty data");
  return merit_from(target, parents, [&](std::size_t a, std::size_t b) {
    return su_unchecked(joint_counts(data, a, b));
  });
}

std::uint64_t parent_complexity(std::span<const std::size_t> parents,
                                std::span<const std::size_t> cardinalities) {
  std::uint64_t product = 1;
  for (std::size_t q : parents) {
    const std::uint64_t size = cardinalities[q];
    if (size != 0 && product > (kComplexityOverCap - 1) / size) {
      return kComplexityOverCap;
    }
    product *= size;
  }
  return product;
}

std::vector<std::size_t> visitation_order(
    const CorrelationMatrix& correlations) {
  std::vector<std::size_t> order(correlations.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return correlations.marginal_entropy(a) >
                            correlations.marginal_entropy(b);
                   });
  return order;
}

StructureResult greedy_parent_search(
    const DiscreteTable& data, const StructureOptions& options,
    const std::optional<StructureNoise>& noise) {
  require(!data.empty(), "structure learning needs a nonempty table");
  require(options.complexity_cap >= 1, "complexity_cap must be at least 1");
  const std::size_t m = data.num_attributes();
  const auto cards = cardinalities(data.schema());
  const CorrelationMatrix correlations =
      CorrelationMatrix::compute(data, noise, options.workers);

  StructureResult result;
  auto& structure = result.structure;
  structure.parents.assign(m, {});
  structure.scores.assign(m, 0.0);
  structure.order = visitation_order(correlations);
  result.report.attributes.assign(m, {});

  for (std::size_t pos = 0; pos < m; ++pos) {
    const std::size_t target = structure.order[pos];
    AttributeSearchReport& report = result.report.attributes[target];
    std::vector<std::size_t> chosen;
    double current = 0;
    while (chosen.size() < options.max_parents) {
      double best_score = current;
      std::optional<std::size_t> best;
      for (std::size_t k = 0; k < pos; ++k) {
        const std::size_t candidate = structure.order[k];
        if (std::find(chosen.begin(), chosen.end(), candidate) !=
            chosen.end()) {
          continue;
        }
        std::vector<std::size_t> trial = chosen;
        trial.push_back(candidate);
        if (parent_complexity(trial, cards) > options.complexity_cap) {
          report.cap_pruned = true;
          continue;
        }
        const double score = merit_score(target, trial, correlations);
        ++report.candidates_examined;
        if (score > best_score) {
          best_score = score;
          best = candidate;
        }
      }
      if (!best || best_score - current <= kMinImprovement) break;
      chosen.push_back(*best);
      current = best_score;
      report.trajectory.push_back(current);
    }
    report.parents = chosen;
    report.merit = current;
    structure.parents[target] = std::move(chosen);
    structure.scores[target] = current;
  }
  return result;
}

void write_structure(const ParentSets& structure, KeyValueFile& doc) {
  doc.set_indices("structure.order", structure.order);
  std::vector<std::size_t> position(structure.order.size());
  for (std::size_t i = 0; i < structure.order.size(); ++i) {
    position[structure.order[i]] = i;
  }
  for (std::size_t j = 0; j < structure.num_attributes(); ++j) {
    const std::string prefix = "structure." + std::to_string(j) + ".";
    doc.set_indices(prefix + "parents", structure.parents[j]);
    doc.set_double(prefix + "score", structure.scores[j]);
    doc.set_int(prefix + "order_position",
                static_cast<std::int64_t>(position[j]));
  }
}

ParentSets read_structure(const KeyValueFile& doc, std::size_t m) {
  ParentSets structure;
  structure.order = doc.get_indices("structure.order");
  structure.parents.resize(m);
  structure.scores.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::string prefix = "structure." + std::to_string(j) + ".";
    structure.parents[j] = doc.get_indices(prefix + "parents");
    structure.scores[j] = doc.get_double(prefix + "score");
    const auto position = doc.get_int(prefix + "order_position");
    if (position < 0 || static_cast<std::size_t>(position) >= m ||
        structure.order.size() != m ||
        structure.order[static_cast<std::size_t>(position)] != j) {
      fail(ErrorCode::kStructural,
           "key '" + prefix + "order_position' disagrees with structure.order");
    }
  }
  if (!structure.is_topological()) {
    fail(ErrorCode::kStructural, "structure.order is not a topological order");
  }
  return structure;
}

}  // namespace dsyn
