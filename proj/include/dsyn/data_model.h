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

// Tabular data ingestion: CSV parsing, schema inference, equal-width
// discretization of continuous columns and the disjoint seed / structure /
// parameter split.

#ifndef DSYN_DATA_MODEL_H_
#define DSYN_DATA_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsyn/kv_file.h"
#include "dsyn/random.h"

namespace dsyn {

enum class AttributeKind { kCategorical, kContinuous };

std::string_view attribute_kind_name(AttributeKind kind);

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;
  // Category labels. For continuous attributes these are the bin midpoints,
  // which is also what gets written when a record is released.
  std::vector<std::string> domain;
  // bins + 1 ascending boundaries; continuous attributes only.
  std::vector<double> bin_edges;

  std::size_t cardinality() const { return domain.size(); }

  // Throws Error(kInvalidArgument) if the finished-schema invariants fail.
  void validate() const;

  bool operator==(const AttributeSchema&) const = default;
};

using Schema = std::vector<AttributeSchema>;
using Category = std::uint32_t;
using Record = std::vector<Category>;

std::vector<std::size_t> cardinalities(const Schema& schema);

// Rows of category indices over a finished schema. Immutable once built.
class DiscreteTable {
 public:
  DiscreteTable() = default;
  // Validates the schema and that every cell lies inside its domain.
  DiscreteTable(Schema schema, std::vector<Record> rows);

  const Schema& schema() const { return schema_; }
  const std::vector<Record>& rows() const { return rows_; }
  const Record& row(std::size_t i) const { return rows_[i]; }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_attributes() const { return schema_.size(); }
  bool empty() const { return rows_.empty(); }

  // Histogram of attribute j.
  std::vector<double> marginal_counts(std::size_t j) const;

 private:
  Schema schema_;
  std::vector<Record> rows_;
};

// Header plus cell matrix exactly as read.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> cells;

  std::size_t num_rows() const { return cells.size(); }
  std::size_t num_columns() const { return header.size(); }
};

RawTable parse_raw_table(std::string_view text);

// Reads a CSV whose first record is the header. When `declared` is given the
// header must list exactly its attribute names, in order.
RawTable ingest_csv(const std::filesystem::path& path,
                    const Schema* declared = nullptr);

// Categorical when the column has a non-numeric cell or at most
// max_categories distinct values; continuous otherwise. Continuous
// attributes come back without bin edges or domain; discretize fills them.
Schema infer_schema(const RawTable& raw, std::size_t max_categories);

// Maps every cell to its category index. Continuous attributes without bin
// edges receive `bins` equal-width bins over the observed [min, max]; those
// that already carry edges are binned against them, clamping values outside
// the range into the first or last bin.
DiscreteTable discretize(const RawTable& raw, Schema schema, std::size_t bins);

// Bin containing `value`; the last bin is closed on the right.
std::size_t bin_index(std::span<const double> edges, double value);

struct SplitFractions {
  double ds = 0.4;
  double dt = 0.3;
  double dp = 0.3;
};

struct DatasetSplit {
  DiscreteTable ds;  // seeds for synthesis
  DiscreteTable dt;  // structure learning
  DiscreteTable dp;  // parameter learning
  // Row indices of origin, ascending.
  std::vector<std::size_t> ds_rows;
  std::vector<std::size_t> dt_rows;
  std::vector<std::size_t> dp_rows;
};

// Shuffles row indices with `rng` and cuts them by cumulative fractions.
// DT and DP sizes are rounded; DS takes the remainder.
DatasetSplit split(const DiscreteTable& table, SplitFractions fractions,
                   Rng& rng);

DiscreteTable select_rows(const DiscreteTable& table,
                          std::span<const std::size_t> rows);

// Writes the table back as CSV using domain labels.
std::string format_table_csv(const DiscreteTable& table);

void write_schema(const Schema& schema, KeyValueFile& doc);
Schema read_schema(const KeyValueFile& doc);

}  // namespace dsyn

#endif  // DSYN_DATA_MODEL_H_
