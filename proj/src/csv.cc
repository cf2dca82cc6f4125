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

#include "dsyn/csv.h"

#include "dsyn/error.h"

namespace dsyn {

std::vector<CsvRecord> parse_csv(std::string_view text) {
  // Strip a UTF-8 byte order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string cell;
  std::size_t line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool cell_was_quoted = false;
  bool record_has_content = false;

  auto end_cell = [&] {
    current.cells.push_back(std::move(cell));
    cell.clear();
    cell_was_quoted = false;
  };
  auto end_record = [&] {
    end_cell();
    records.push_back(std::move(current));
    current = CsvRecord{};
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      if (!cell.empty() || cell_was_quoted) {
        throw CsvError(line, "unexpected quote inside unquoted cell");
      }
      in_quotes = true;
      cell_was_quoted = true;
      record_has_content = true;
    } else if (c == ',') {
      end_cell();
      record_has_content = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      // Blank lines are not records.
      if (record_has_content || !cell.empty()) end_record();
      ++line;
      current.line = line;
    } else {
      if (cell_was_quoted) {
        throw CsvError(line, "characters after closing quote");
      }
      cell += c;
      record_has_content = true;
    }
  }
  if (in_quotes) throw CsvError(current.line, "unterminated quoted cell");
  if (record_has_content || !cell.empty()) end_record();
  return records;
}

std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(cell);
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  out += '\n';
  return out;
}

}  // namespace dsyn
