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

#include <algorithm>
#include <cmath>

#include "dsyn/error.h"

namespace dsyn {
namespace {

// Probabilities are written with 17 significant digits, enough for an exact
// round trip of any double.
constexpr int kProbabilityDigits = 17;

std::size_t config_count(const std::vector<std::size_t>& parent_cards) {
  std::size_t n = 1;
  for (std::size_t c : parent_cards) n *= c;
  return n;
}

std::vector<Category> decode_config(std::size_t index,
                                    const std::vector<std::size_t>& cards) {
  std::vector<Category> config(cards.size());
  for (std::size_t k = cards.size(); k-- > 0;) {
    config[k] = static_cast<Category>(index % cards[k]);
    index /= cards[k];
  }
  return config;
}

}  // namespace

std::string_view adjacency_name(Adjacency adjacency) {
  return adjacency == Adjacency::kAddRemove ? "add_remove" : "replace";
}

Adjacency parse_adjacency(std::string_view text) {
  if (text == "add_remove") return Adjacency::kAddRemove;
  if (text == "replace") return Adjacency::kReplace;
  fail(ErrorCode::kInvalidArgument,
       "adjacency must be add_remove or replace, got '" + std::string(text) +
           "'");
}

std::vector<AttributeCounts> count_vectors(const DiscreteTable& data,
                                           const ParentSets& structure) {
  const std::size_t m = data.num_attributes();
  require(structure.num_attributes() == m,
          "structure has " + std::to_string(structure.num_attributes()) +
              " attributes, data has " + std::to_string(m));
  const auto cards = cardinalities(data.schema());
  std::vector<AttributeCounts> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    AttributeCounts& ac = out[i];
    ac.target = i;
    ac.cardinality = cards[i];
    ac.parents = structure.parents[i];
    for (std::size_t q : ac.parents)
      ac.parent_cardinalities.push_back(cards[q]);
    const std::size_t n_configs = config_count(ac.parent_cardinalities);
    ac.vectors.resize(n_configs);
    for (std::size_t c = 0; c < n_configs; ++c) {
      ac.vectors[c].target = i;
      ac.vectors[c].parent_config = decode_config(c, ac.parent_cardinalities);
      ac.vectors[c].counts.assign(cards[i], 0.0);
    }
    for (const auto& row : data.rows()) {
      std::size_t c = 0;
      for (std::size_t k = 0; k < ac.parents.size(); ++k) {
        c = c * ac.parent_cardinalities[k] + row[ac.parents[k]];
      }
      ac.vectors[c].counts[row[i]] += 1.0;
    }
  }
  return out;
}

double count_sensitivity(Adjacency adjacency) {
  return adjacency == Adjacency::kAddRemove ? 1.0 : 2.0;
}

Cpt::Cpt(std::vector<std::size_t> parents,
         std::vector<std::size_t> parent_cardinalities, std::size_t cardinality,
         std::vector<double> probabilities)
    : parents_(std::move(parents)),
      parent_cardinalities_(std::move(parent_cardinalities)),
      cardinality_(cardinality),
      num_configs_(config_count(parent_cardinalities_)),
      probabilities_(std::move(probabilities)) {
  require(parents_.size() == parent_cardinalities_.size(),
          "cpt: parent list and cardinalities differ in length");
  require(cardinality_ > 0, "cpt: empty domain");
  require(probabilities_.size() == num_configs_ * cardinality_,
          "cpt: expected " + std::to_string(num_configs_ * cardinality_) +
              " probabilities, got " + std::to_string(probabilities_.size()));
  for (std::size_t c = 0; c < num_configs_; ++c) {
    double sum = 0;
    for (double p : row(c)) {
      require(p >= 0 && std::isfinite(p), "cpt: invalid probability");
      sum += p;
    }
    require(std::fabs(sum - 1.0) <= 1e-9,
            "cpt: row " + std::to_string(c) + " sums to " + format_double(sum));
  }
}

std::size_t Cpt::config_index(std::span<const Category> record) const {
  std::size_t c = 0;
  for (std::size_t k = 0; k < parents_.size(); ++k) {
    c = c * parent_cardinalities_[k] + record[parents_[k]];
  }
  return c;
}

CptSet estimate_cpts(const std::vector<AttributeCounts>& counts, double alpha,
                     double epsilon_p, Adjacency adjacency, Rng& rng) {
  require(alpha > 0 && std::isfinite(alpha), "alpha must be positive");
  require(epsilon_p > 0, "epsilon_p must be positive");
  const std::size_t m = counts.size();
  const bool noisy = !std::isinf(epsilon_p);
  const double scale =
      noisy ? count_sensitivity(adjacency) * static_cast<double>(m) / epsilon_p
            : 0.0;

  CptSet out;
  out.alpha = alpha;
  out.epsilon_p = epsilon_p;
  out.adjacency = adjacency;
  out.tables.reserve(m);
  for (const auto& ac : counts) {
    std::vector<double> probabilities;
    probabilities.reserve(ac.vectors.size() * ac.cardinality);
    std::vector<double> noisy_counts(ac.cardinality);
    for (const auto& cv : ac.vectors) {
      require(cv.counts.size() == ac.cardinality,
              "count vector length does not match the domain");
      double total = 0;
      for (std::size_t v = 0; v < ac.cardinality; ++v) {
        double n = cv.counts[v];
        if (noisy) n = std::max(0.0, n + rng.laplace(scale));
        noisy_counts[v] = n;
        total += n;
      }
      const double denom = total + alpha * static_cast<double>(ac.cardinality);
      for (double n : noisy_counts)
        probabilities.push_back((n + alpha) / denom);
    }
    out.tables.emplace_back(ac.parents, ac.parent_cardinalities, ac.cardinality,
                            std::move(probabilities));
  }
  return out;
}

double learn_hyperparameter(std::size_t rows, std::size_t num_attributes) {
  if (num_attributes == 0) return 1.0;
  return std::max(1.0, static_cast<double>(rows) /
                           (100.0 * static_cast<double>(num_attributes)));
}

void write_cpts(const CptSet& cpts, KeyValueFile& doc) {
  doc.set_double("params.alpha", cpts.alpha);
  doc.set_double("params.epsilon_p", cpts.epsilon_p);
  doc.set("params.adjacency", std::string(adjacency_name(cpts.adjacency)));
  for (std::size_t i = 0; i < cpts.num_attributes(); ++i) {
    const Cpt& t = cpts[i];
    const std::string prefix = "cpt." + std::to_string(i) + ".";
    doc.set_int(prefix + "configs", static_cast<std::int64_t>(t.num_configs()));
    for (std::size_t c = 0; c < t.num_configs(); ++c) {
      const auto row = t.row(c);
      doc.set_doubles(prefix + std::to_string(c),
                      std::vector<double>(row.begin(), row.end()),
                      kProbabilityDigits);
    }
  }
}

CptSet read_cpts(const KeyValueFile& doc, const ParentSets& structure,
                 const Schema& schema) {
  CptSet cpts;
  cpts.alpha = doc.get_double("params.alpha");
  cpts.epsilon_p = doc.get_double("params.epsilon_p");
  cpts.adjacency = parse_adjacency(doc.get("params.adjacency"));
  const auto cards = cardinalities(schema);
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const std::string prefix = "cpt." + std::to_string(i) + ".";
    std::vector<std::size_t> parent_cards;
    for (std::size_t q : structure.parents[i]) parent_cards.push_back(cards[q]);
    const std::size_t n_configs = config_count(parent_cards);
    if (doc.get_int(prefix + "configs") !=
        static_cast<std::int64_t>(n_configs)) {
      fail(ErrorCode::kStructural,
           "key '" + prefix + "configs' disagrees with the structure");
    }
    std::vector<double> probabilities;
    for (std::size_t c = 0; c < n_configs; ++c) {
      const auto row = doc.get_doubles(prefix + std::to_string(c));
      if (row.size() != cards[i]) {
        fail(ErrorCode::kStructural,
             "key '" + prefix + std::to_string(c) + "' has the wrong length");
      }
      probabilities.insert(probabilities.end(), row.begin(), row.end());
    }
    try {
      cpts.tables.emplace_back(structure.parents[i], parent_cards, cards[i],
                               std::move(probabilities));
    } catch (const Error& e) {
      fail(ErrorCode::kStructural, prefix + ": " + e.what());
    }
  }
  return cpts;
}

}  // namespace dsyn
