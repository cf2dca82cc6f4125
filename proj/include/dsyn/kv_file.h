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

// Flat "key = value" text documents. Used for the config file, the model
// file, the split manifest and every report. Entries keep insertion order so
// that writing is byte-stable.

#ifndef DSYN_KV_FILE_H_
#define DSYN_KV_FILE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dsyn {

// Shortest decimal text that parses back to exactly `value`. Infinity is
// written as "inf".
std::string format_double(double value);

// Fixed-width scientific-ish text with `digits` significant digits.
std::string format_double_digits(double value, int digits);

// Accepts anything format_double produces plus "infinity"/"+inf".
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

class KeyValueFile {
 public:
  using Entry = std::pair<std::string, std::string>;

  void set(const std::string& key, std::string value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, std::int64_t value);
  void set_doubles(const std::string& key, const std::vector<double>& values,
                   int digits = 0);
  void set_indices(const std::string& key,
                   const std::vector<std::size_t>& values);
  void set_strings(const std::string& key,
                   const std::vector<std::string>& values);

  bool contains(const std::string& key) const;
  const std::string* find(const std::string& key) const;

  // Typed getters throw Error(kStructural) naming the key when the key is
  // missing or its value does not parse.
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::size_t> get_indices(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  const std::vector<Entry>& entries() const { return entries_; }

  std::string to_string() const;
  static KeyValueFile parse(std::string_view text,
                            std::string_view source = "<memory>");

  void write(const std::filesystem::path& path) const;
  static KeyValueFile read(const std::filesystem::path& path);

 private:
  std::vector<Entry> entries_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace dsyn

#endif  // DSYN_KV_FILE_H_
