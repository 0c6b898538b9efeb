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

#include "hotspot/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hotspot/error.hpp"

namespace hotspot {

std::string format_double(double value) {
  std::string out;
  append_double(out, value);
  return out;
}

void append_double(std::string& out, double value) {
  if (std::isnan(value)) return;
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) fail(ErrorKind::kInput, "cannot format number");
  out.append(buf, end);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_uint(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

namespace {

std::optional<int> fixed_digits(std::string_view text, std::size_t pos, std::size_t n) {
  if (pos + n > text.size()) return std::nullopt;
  int value = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

std::optional<Hour> parse_rfc3339_hour(std::string_view text) {
  using namespace std::chrono;
  text = trim(text);
  // YYYY-MM-DDTHH:MM:SS then Z or +00:00 / -00:00
  if (text.size() < 20) return std::nullopt;
  auto y = fixed_digits(text, 0, 4);
  auto mo = fixed_digits(text, 5, 2);
  auto d = fixed_digits(text, 8, 2);
  auto h = fixed_digits(text, 11, 2);
  auto mi = fixed_digits(text, 14, 2);
  auto s = fixed_digits(text, 17, 2);
  if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != 't' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':')
    return std::nullopt;
  const std::string_view zone = text.substr(19);
  if (zone != "Z" && zone != "z" && zone != "+00:00" && zone != "-00:00") return std::nullopt;
  if (*h > 23 || *mi != 0 || *s != 0) return std::nullopt;
  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Hour{sys_days{ymd}} + hours{*h};
}

std::string format_rfc3339(Hour hour) {
  using namespace std::chrono;
  const auto day_start = floor<days>(hour);
  const year_month_day ymd{day_start};
  const auto h = (hour - day_start).count();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:00:00Z", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(h));
  return buf;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  return text;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.emplace_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

CsvReader::CsvReader(const std::string& path) : in_(path), path_(path) {
  if (!in_) fail(ErrorKind::kIo, "cannot open " + path);
}

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  for (;;) {
    if (!std::getline(in_, buffer_)) return false;
    ++next_line_;
    if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    if (!buffer_.empty()) break;
  }
  line_ = next_line_;
  // UTF-8 byte order mark on the first line.
  if (line_ == 1 && buffer_.size() >= 3 && buffer_.compare(0, 3, "\xEF\xBB\xBF") == 0)
    buffer_.erase(0, 3);

  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  for (;;) {
    if (i == buffer_.size()) {
      if (!quoted) break;
      // Quoted field spans a newline.
      std::string more;
      if (!std::getline(in_, more)) fail(ErrorKind::kInput, path_ + ": unterminated quote");
      ++next_line_;
      if (!more.empty() && more.back() == '\r') more.pop_back();
      field.push_back('\n');
      buffer_ = std::move(more);
      i = 0;
      continue;
    }
    const char c = buffer_[i++];
    if (quoted) {
      if (c == '"') {
        if (i < buffer_.size() && buffer_[i] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::vector<std::size_t> require_columns(const std::vector<std::string>& header,
                                         const std::vector<std::string_view>& names,
                                         const std::string& path) {
  std::vector<std::size_t> positions;
  positions.reserve(names.size());
  for (auto name : names) {
    std::size_t found = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) {
        found = i;
        break;
      }
    }
    if (found == header.size())
      fail(ErrorKind::kSchema, path + ": missing column '" + std::string(name) + "'");
    positions.push_back(found);
  }
  return positions;
}

void append_csv_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hotspot
