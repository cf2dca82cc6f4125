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

#ifndef DSYN_ERROR_H_
#define DSYN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsyn {

enum class ErrorCode {
  kInvalidArgument,
  kStructural,  // malformed input file (ragged CSV, bad key-value line)
  kEmptyInput,
  kSchemaMismatch,
  kNotFound,
  kInternal,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this type. The message is a
// single line so the CLI can print it verbatim after a fixed prefix.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Structural CSV error that remembers the 1-based line it was detected on.
class CsvError : public Error {
 public:
  CsvError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kStructural,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::kInvalidArgument, message);
}

}  // namespace dsyn

#endif  // DSYN_ERROR_H_
