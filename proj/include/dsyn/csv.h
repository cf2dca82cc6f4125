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

#ifndef DSYN_CSV_H_
#define DSYN_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace dsyn {

// RFC-4180 records: comma separated, double-quote quoting with "" escapes,
// CRLF or LF line ends. A trailing newline does not start a new record.
// Each record is returned together with the 1-based line it started on.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

std::vector<CsvRecord> parse_csv(std::string_view text);

// Quotes a cell only when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view cell);
std::string format_csv_row(const std::vector<std::string>& cells);

}  // namespace dsyn

#endif  // DSYN_CSV_H_
