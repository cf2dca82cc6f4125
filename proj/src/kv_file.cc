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

#include "dsyn/kv_file.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dsyn/error.h"
#include "json.hpp"

namespace dsyn {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& what) {
  fail(ErrorCode::kStructural, "key '" + key + "': " + what);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) fail(ErrorCode::kInternal, "format_double failed");
  return std::string(buf, ptr);
}

std::string format_double_digits(double value, int digits) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf" || text == "infinity" ||
      text == "+infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (text == "-inf" || text == "-infinity")
    return -std::numeric_limits<double>::infinity();
  double value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

void KeyValueFile::set(const std::string& key, std::string value) {
  require(valid_key(key), "invalid key '" + key + "'");
  require(value.find('\n') == std::string::npos,
          "value for '" + key + "' contains a newline");
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(key, std::move(value));
}

void KeyValueFile::set_double(const std::string& key, double value) {
  set(key, format_double(value));
}

void KeyValueFile::set_int(const std::string& key, std::int64_t value) {
  set(key, std::to_string(value));
}

void KeyValueFile::set_doubles(const std::string& key,
                               const std::vector<double>& values, int digits) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += digits > 0 ? format_double_digits(values[i], digits)
                      : format_double(values[i]);
  }
  set(key, std::move(out));
}

void KeyValueFile::set_indices(const std::string& key,
                               const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(values[i]);
  }
  set(key, std::move(out));
}

void KeyValueFile::set_strings(const std::string& key,
                               const std::vector<std::string>& values) {
  set(key, nlohmann::json(values).dump());
}

bool KeyValueFile::contains(const std::string& key) const {
  return find(key) != nullptr;
}

const std::string* KeyValueFile::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& KeyValueFile::get(const std::string& key) const {
  const std::string* v = find(key);
  if (v == nullptr) fail(ErrorCode::kStructural, "missing key '" + key + "'");
  return *v;
}

double KeyValueFile::get_double(const std::string& key) const {
  auto v = parse_double(get(key));
  if (!v) bad_value(key, "not a number");
  return *v;
}

std::int64_t KeyValueFile::get_int(const std::string& key) const {
  auto v = parse_int(get(key));
  if (!v) bad_value(key, "not an integer");
  return *v;
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (auto token : split_ws(get(key))) {
    auto v = parse_double(token);
    if (!v) bad_value(key, "not a number list");
    out.push_back(*v);
  }
  return out;
}

std::vector<std::size_t> KeyValueFile::get_indices(
    const std::string& key) const {
  std::vector<std::size_t> out;
  for (auto token : split_ws(get(key))) {
    auto v = parse_int(token);
    if (!v || *v < 0) bad_value(key, "not an index list");
    out.push_back(static_cast<std::size_t>(*v));
  }
  return out;
}

std::vector<std::string> KeyValueFile::get_strings(
    const std::string& key) const {
  const auto parsed = nlohmann::json::parse(get(key), nullptr, false);
  if (parsed.is_discarded() || !parsed.is_array()) {
    bad_value(key, "not a string list");
  }
  std::vector<std::string> out;
  for (const auto& item : parsed) {
    if (!item.is_string()) bad_value(key, "not a string list");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string KeyValueFile::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

KeyValueFile KeyValueFile::parse(std::string_view text,
                                 std::string_view source) {
  KeyValueFile doc;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const std::string where =
        std::string(source) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      fail(ErrorCode::kStructural, where + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) {
      fail(ErrorCode::kStructural, where + ": invalid key '" + key + "'");
    }
    if (doc.contains(key)) {
      fail(ErrorCode::kStructural, where + ": duplicate key '" + key + "'");
    }
    doc.entries_.emplace_back(key, std::string(trim(line.substr(eq + 1))));
  }
  return doc;
}

void KeyValueFile::write(const std::filesystem::path& path) const {
  write_file(path, to_string());
}

KeyValueFile KeyValueFile::read(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kNotFound, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kNotFound, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out)
    fail(ErrorCode::kInternal, "write to '" + path.string() + "' failed");
}

}  // namespace dsyn
