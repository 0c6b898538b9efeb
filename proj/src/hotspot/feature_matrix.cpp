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

#include "hotspot/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "hotspot/error.hpp"
#include "hotspot/text.hpp"

namespace hotspot {

FeatureMatrix::FeatureMatrix(std::vector<std::string> names, std::vector<CellId> ids)
    : names_(std::move(names)), ids_(std::move(ids)) {
  std::unordered_set<std::string> unique(names_.begin(), names_.end());
  if (unique.size() != names_.size()) fail(ErrorKind::kSchema, "duplicate feature names");
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
    fail(ErrorKind::kSchema, "duplicate cell ids in feature matrix");
  values_.assign(names_.size() * ids_.size(), std::numeric_limits<double>::quiet_NaN());
}

std::vector<double> FeatureMatrix::column(std::size_t j) const {
  std::vector<double> out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = at(i, j);
  return out;
}

std::optional<std::size_t> FeatureMatrix::column_index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::optional<std::size_t> FeatureMatrix::row_index(CellId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::string> names) const {
  std::unordered_map<std::string, std::size_t> lookup;
  for (std::size_t j = 0; j < names_.size(); ++j) lookup.emplace(names_[j], j);
  std::vector<std::size_t> source;
  source.reserve(names.size());
  for (const auto& n : names) {
    auto it = lookup.find(n);
    if (it == lookup.end()) fail(ErrorKind::kSchema, "unknown feature '" + n + "'");
    source.push_back(it->second);
  }
  FeatureMatrix out(std::vector<std::string>(names.begin(), names.end()), ids_);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < source.size(); ++j) out.at(i, j) = at(i, source[j]);
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const CellId> ids) const {
  FeatureMatrix out(names_, std::vector<CellId>(ids.begin(), ids.end()));
  for (std::size_t i = 0; i < out.rows(); ++i) {
    const auto src = row_index(out.ids_[i]);
    if (!src)
      fail(ErrorKind::kSchema,
           "cell " + std::to_string(to_u64(out.ids_[i])) + " missing from feature matrix");
    std::copy_n(row(*src).begin(), cols(), out.row(i).begin());
  }
  return out;
}

bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
  return a.names_ == b.names_ && a.ids_ == b.ids_ && a.values_.size() == b.values_.size() &&
         (a.values_.empty() ||
          std::memcmp(a.values_.data(), b.values_.data(), a.values_.size() * sizeof(double)) == 0);
}

std::string feature_matrix_to_csv(const FeatureMatrix& m) {
  std::string out = "cell_id";
  for (const auto& n : m.names()) {
    out += ',';
    append_csv_field(out, n);
  }
  out += '\n';
  out.reserve(out.size() + m.rows() * m.cols() * 20);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += std::to_string(to_u64(m.ids()[i]));
    for (double v : m.row(i)) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

FeatureMatrix load_feature_matrix(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row) || row.empty() || trim(row[0]) != "cell_id")
    fail(ErrorKind::kSchema, path + ": header must start with cell_id");
  std::vector<std::string> names(row.begin() + 1, row.end());
  std::vector<CellId> ids;
  std::vector<std::vector<double>> values;
  while (reader.next(row)) {
    const std::string where = path + ":" + std::to_string(reader.line());
    if (row.size() != names.size() + 1) fail(ErrorKind::kSchema, where + ": wrong field count");
    const auto id = parse_uint(row[0]);
    if (!id) fail(ErrorKind::kInput, where + ": malformed cell_id");
    ids.push_back(CellId{*id});
    std::vector<double> r(names.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (trim(row[j + 1]).empty()) continue;
      const auto v = parse_double(row[j + 1]);
      if (!v) fail(ErrorKind::kInput, where + ": malformed value in column " + names[j]);
      r[j] = *v;
    }
    values.push_back(std::move(r));
  }
  FeatureMatrix m(names, ids);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto i = *m.row_index(ids[k]);
    std::copy(values[k].begin(), values[k].end(), m.row(i).begin());
  }
  return m;
}

}  // namespace hotspot
