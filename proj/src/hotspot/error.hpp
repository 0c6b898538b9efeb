/*
 * Copyright 2026 The Hotspot Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hotspot {

// Every failure the library reports falls into one of these categories. The
// C API maps them 1:1 onto hs_status codes and the CLI onto exit statuses.
enum class ErrorKind {
  kInput,             // malformed or out-of-range input values
  kConfig,            // invalid configuration / parameters
  kSchema,            // missing columns, shape or name mismatch
  kInsufficientData,  // too few rows/cells for the requested statistic
  kUndefined,         // mathematically undefined result (entropy of zeros ...)
  kEmptyWindow,       // window/series with no usable values
  kTraining,          // model cannot be trained (e.g. single class)
  kCoverage,          // no out-of-bag coverage
  kNaming,            // unknown feature vocabulary item
  kIo,                // file system errors
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace hotspot
