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

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hotspot {

// Hour-resolution UTC timestamp.
using Hour = std::chrono::sys_time<std::chrono::hours>;

// Shortest decimal that parses back to the same double; NaN renders empty.
std::string format_double(double value);
void append_double(std::string& out, double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

// Accepts "YYYY-MM-DDTHH:MM:SSZ" (or "+00:00"); minutes and seconds must be 0.
std::optional<Hour> parse_rfc3339_hour(std::string_view text);
std::string format_rfc3339(Hour hour);

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerant.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path);

  // Reads the next record; returns false at end of file. Blank lines are skipped.
  bool next(std::vector<std::string>& fields);

  // 1-based physical line number of the most recently returned record.
  std::size_t line() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::ifstream in_;
  std::string path_;
  std::string buffer_;
  std::size_t line_ = 0;
  std::size_t next_line_ = 0;
};

// Looks up each required column in a header row; throws a schema error naming
// the first missing column.
std::vector<std::size_t> require_columns(const std::vector<std::string>& header,
                                         const std::vector<std::string_view>& names,
                                         const std::string& path);

void append_csv_field(std::string& out, std::string_view field);

// Writes the whole buffer, replacing any existing file.
void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace hotspot
