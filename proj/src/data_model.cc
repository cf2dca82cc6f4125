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

#include "dsyn/data_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "dsyn/csv.h"
#include "dsyn/error.h"

namespace dsyn {
namespace {

std::optional<double> parse_numeric_cell(const std::string& cell) {
  auto v = parse_double(cell);
  if (!v || !std::isfinite(*v)) return std::nullopt;
  return v;
}

// Equal-width boundaries over [lo, hi]. A constant column gets one unit-wide
// bin centred on its value so the midpoint label reproduces it.
std::vector<double> equal_width_edges(double lo, double hi, std::size_t bins) {
  if (lo == hi) return {lo - 0.5, hi + 0.5};
  std::vector<double> edges(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    edges[i] = lo + width * static_cast<double>(i);
  }
  edges[bins] = hi;
  return edges;
}

std::vector<std::string> midpoint_labels(const std::vector<double>& edges) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    labels.push_back(format_double(0.5 * (edges[i] + edges[i + 1])));
  }
  return labels;
}

}  // namespace

std::string_view attribute_kind_name(AttributeKind kind) {
  return kind == AttributeKind::kCategorical ? "categorical" : "continuous";
}

void AttributeSchema::validate() const {
  require(!domain.empty(), "attribute '" + name + "' has an empty domain");
  std::set<std::string> seen;
  for (const auto& label : domain) {
    require(seen.insert(label).second,
            "attribute '" + name + "' has duplicate label '" + label + "'");
  }
  if (kind == AttributeKind::kCategorical) {
    require(bin_edges.empty(),
            "categorical attribute '" + name + "' has bin edges");
    return;
  }
  require(bin_edges.size() == domain.size() + 1,
          "continuous attribute '" + name +
              "' needs one more bin edge than labels");
  for (std::size_t i = 0; i + 1 < bin_edges.size(); ++i) {
    require(bin_edges[i] < bin_edges[i + 1],
            "bin edges of '" + name + "' are not strictly increasing");
  }
}

std::vector<std::size_t> cardinalities(const Schema& schema) {
  std::vector<std::size_t> out;
  out.reserve(schema.size());
  for (const auto& a : schema) out.push_back(a.cardinality());
  return out;
}

DiscreteTable::DiscreteTable(Schema schema, std::vector<Record> rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
  for (const auto& a : schema_) a.validate();
  const std::size_t m = schema_.size();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    require(rows_[r].size() == m, "row " + std::to_string(r) + " has " +
                                      std::to_string(rows_[r].size()) +
                                      " cells, expected " + std::to_string(m));
    for (std::size_t j = 0; j < m; ++j) {
      require(rows_[r][j] < schema_[j].cardinality(),
              "row " + std::to_string(r) + " attribute '" + schema_[j].name +
                  "' index out of domain");
    }
  }
}

std::vector<double> DiscreteTable::marginal_counts(std::size_t j) const {
  std::vector<double> counts(schema_[j].cardinality(), 0.0);
  for (const auto& row : rows_) counts[row[j]] += 1.0;
  return counts;
}

RawTable parse_raw_table(std::string_view text) {
  auto records = parse_csv(text);
  if (records.empty()) fail(ErrorCode::kEmptyInput, "empty CSV file");
  RawTable raw;
  raw.header = std::move(records.front().cells);
  for (std::size_t i = 1; i < records.size(); ++i) {
    auto& rec = records[i];
    if (rec.cells.size() != raw.header.size()) {
      // Data rows are numbered from 1 after the header, i.e. the file's
      // physical record number.
      throw CsvError(rec.line, "row " + std::to_string(i + 1) + " has " +
                                   std::to_string(rec.cells.size()) +
                                   " cells, header has " +
                                   std::to_string(raw.header.size()));
    }
    raw.cells.push_back(std::move(rec.cells));
  }
  std::set<std::string> names;
  for (const auto& h : raw.header) {
    if (!names.insert(h).second) {
      fail(ErrorCode::kStructural, "duplicate column name '" + h + "'");
    }
  }
  return raw;
}

RawTable ingest_csv(const std::filesystem::path& path, const Schema* declared) {
  RawTable raw = parse_raw_table(read_file(path));
  if (declared != nullptr) {
    if (declared->size() != raw.header.size()) {
      fail(ErrorCode::kSchemaMismatch,
           path.string() + ": " + std::to_string(raw.header.size()) +
               " columns, schema has " + std::to_string(declared->size()));
    }
    for (std::size_t j = 0; j < declared->size(); ++j) {
      if ((*declared)[j].name != raw.header[j]) {
        fail(ErrorCode::kSchemaMismatch,
             path.string() + ": column " + std::to_string(j) + " is '" +
                 raw.header[j] + "', schema expects '" + (*declared)[j].name +
                 "'");
      }
    }
  }
  return raw;
}

Schema infer_schema(const RawTable& raw, std::size_t max_categories) {
  require(max_categories > 0, "max_categories must be positive");
  require(raw.num_rows() > 0, "cannot infer a schema from an empty table");
  Schema schema;
  for (std::size_t j = 0; j < raw.num_columns(); ++j) {
    std::set<std::string> distinct;
    bool numeric = true;
    for (const auto& row : raw.cells) {
      const std::string& cell = row[j];
      if (cell.empty()) continue;
      distinct.insert(cell);
      if (numeric && !parse_numeric_cell(cell)) numeric = false;
    }
    if (distinct.empty()) {
      fail(ErrorCode::kInvalidArgument,
           "column '" + raw.header[j] + "' has no non-empty cells");
    }
    AttributeSchema attr;
    attr.name = raw.header[j];
    if (!numeric || distinct.size() <= max_categories) {
      attr.kind = AttributeKind::kCategorical;
      attr.domain.assign(distinct.begin(), distinct.end());
    } else {
      attr.kind = AttributeKind::kContinuous;
    }
    schema.push_back(std::move(attr));
  }
  return schema;
}

std::size_t bin_index(std::span<const double> edges, double value) {
  const std::size_t bins = edges.size() - 1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  if (it == edges.begin()) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(it - edges.begin()) - 1,
                               bins - 1);
}

DiscreteTable discretize(const RawTable& raw, Schema schema, std::size_t bins) {
  require(bins > 0, "bins must be positive");
  require(schema.size() == raw.num_columns(),
          "schema has " + std::to_string(schema.size()) +
              " attributes, table has " + std::to_string(raw.num_columns()));
  const std::size_t m = schema.size();
  for (std::size_t r = 0; r < raw.num_rows(); ++r) {
    for (std::size_t j = 0; j < m; ++j) {
      if (raw.cells[r][j].empty()) {
        fail(ErrorCode::kInvalidArgument,
             "missing value in column '" + schema[j].name + "' at data row " +
                 std::to_string(r + 1));
      }
    }
  }

  std::vector<Record> rows(raw.num_rows(), Record(m));
  for (std::size_t j = 0; j < m; ++j) {
    AttributeSchema& attr = schema[j];
    if (attr.kind == AttributeKind::kCategorical) {
      std::unordered_map<std::string, Category> index;
      for (std::size_t v = 0; v < attr.domain.size(); ++v) {
        index.emplace(attr.domain[v], static_cast<Category>(v));
      }
      for (std::size_t r = 0; r < raw.num_rows(); ++r) {
        const auto it = index.find(raw.cells[r][j]);
        if (it == index.end()) {
          fail(ErrorCode::kSchemaMismatch, "unseen label '" + raw.cells[r][j] +
                                               "' in column '" + attr.name +
                                               "'");
        }
        rows[r][j] = it->second;
      }
      continue;
    }

    std::vector<double> values(raw.num_rows());
    for (std::size_t r = 0; r < raw.num_rows(); ++r) {
      auto v = parse_numeric_cell(raw.cells[r][j]);
      if (!v) {
        fail(ErrorCode::kSchemaMismatch,
             "non-numeric value '" + raw.cells[r][j] +
                 "' in continuous column '" + attr.name + "'");
      }
      values[r] = *v;
    }
    if (attr.bin_edges.empty()) {
      require(!values.empty(), "continuous column '" + attr.name +
                                   "' needs data to derive bin edges");
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      attr.bin_edges = equal_width_edges(*lo, *hi, bins);
      attr.domain = midpoint_labels(attr.bin_edges);
    }
    for (std::size_t r = 0; r < raw.num_rows(); ++r) {
      rows[r][j] = static_cast<Category>(bin_index(attr.bin_edges, values[r]));
    }
  }
  return DiscreteTable(std::move(schema), std::move(rows));
}

DatasetSplit split(const DiscreteTable& table, SplitFractions fractions,
                   Rng& rng) {
  const double f[3] = {fractions.ds, fractions.dt, fractions.dp};
  for (double x : f) {
    require(x >= 0 && std::isfinite(x), "split fractions must be nonnegative");
  }
  require(std::fabs(f[0] + f[1] + f[2] - 1.0) <= 1e-9,
          "split fractions must sum to 1");
  const std::size_t n = table.num_rows();
  const std::size_t nonzero = (f[0] > 0) + (f[1] > 0) + (f[2] > 0);
  require(n >= nonzero, "table has " + std::to_string(n) +
                            " rows, fewer than the " + std::to_string(nonzero) +
                            " nonempty split parts");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }

  const auto rounded = [n](double fraction) {
    return static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(n)));
  };
  const std::size_t n_dt = std::min(n, rounded(f[1]));
  const std::size_t n_dp = std::min(n - n_dt, rounded(f[2]));

  DatasetSplit out;
  out.dt_rows.assign(order.begin(), order.begin() + n_dt);
  out.dp_rows.assign(order.begin() + n_dt, order.begin() + n_dt + n_dp);
  out.ds_rows.assign(order.begin() + n_dt + n_dp, order.end());
  std::sort(out.ds_rows.begin(), out.ds_rows.end());
  std::sort(out.dt_rows.begin(), out.dt_rows.end());
  std::sort(out.dp_rows.begin(), out.dp_rows.end());
  out.ds = select_rows(table, out.ds_rows);
  out.dt = select_rows(table, out.dt_rows);
  out.dp = select_rows(table, out.dp_rows);
  return out;
}

DiscreteTable select_rows(const DiscreteTable& table,
                          std::span<const std::size_t> rows) {
  std::vector<Record> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) {
    require(r < table.num_rows(),
            "row index " + std::to_string(r) + " out of range");
    out.push_back(table.row(r));
  }
  return DiscreteTable(table.schema(), std::move(out));
}

std::string format_table_csv(const DiscreteTable& table) {
  std::vector<std::string> cells;
  for (const auto& a : table.schema()) cells.push_back(a.name);
  std::string out = format_csv_row(cells);
  for (const auto& row : table.rows()) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      cells[j] = table.schema()[j].domain[row[j]];
    }
    out += format_csv_row(cells);
  }
  return out;
}

void write_schema(const Schema& schema, KeyValueFile& doc) {
  doc.set_int("attribute_count", static_cast<std::int64_t>(schema.size()));
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const std::string prefix = "attribute." + std::to_string(j) + ".";
    const auto& a = schema[j];
    doc.set_strings(prefix + "name", {a.name});
    doc.set(prefix + "kind", std::string(attribute_kind_name(a.kind)));
    doc.set_strings(prefix + "domain", a.domain);
    doc.set_doubles(prefix + "bin_edges", a.bin_edges);
  }
}

Schema read_schema(const KeyValueFile& doc) {
  const std::int64_t m = doc.get_int("attribute_count");
  if (m < 0) fail(ErrorCode::kStructural, "negative attribute_count");
  Schema schema(static_cast<std::size_t>(m));
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const std::string prefix = "attribute." + std::to_string(j) + ".";
    auto& a = schema[j];
    const auto name = doc.get_strings(prefix + "name");
    if (name.size() != 1) {
      fail(ErrorCode::kStructural,
           "key '" + prefix + "name' must hold one name");
    }
    a.name = name.front();
    const std::string& kind = doc.get(prefix + "kind");
    if (kind == "categorical") {
      a.kind = AttributeKind::kCategorical;
    } else if (kind == "continuous") {
      a.kind = AttributeKind::kContinuous;
    } else {
      fail(ErrorCode::kStructural, "unknown attribute kind '" + kind + "'");
    }
    a.domain = doc.get_strings(prefix + "domain");
    a.bin_edges = doc.get_doubles(prefix + "bin_edges");
    try {
      a.validate();
    } catch (const Error& e) {
      fail(ErrorCode::kStructural, e.what());
    }
  }
  return schema;
}

}  // namespace dsyn
