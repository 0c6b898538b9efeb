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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hotspot/records.hpp"

namespace hotspot {

// Cells x named real-valued features. Rows are kept in ascending cell_id
// order; missing values are NaN until imputation.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  // All values start missing. Throws kSchema on duplicate names or ids.
  FeatureMatrix(std::vector<std::string> names, std::vector<CellId> ids);

  std::size_t rows() const { return ids_.size(); }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<CellId>& ids() const { return ids_; }

  std::span<double> row(std::size_t i) { return {values_.data() + i * cols(), cols()}; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols(), cols()};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
  double& at(std::size_t i, std::size_t j) { return values_[i * cols() + j]; }
  std::vector<double> column(std::size_t j) const;

  std::optional<std::size_t> column_index(const std::string& name) const;
  std::optional<std::size_t> row_index(CellId id) const;

  // Throw kSchema on unknown names / ids.
  FeatureMatrix select_columns(std::span<const std::string> names) const;
  FeatureMatrix select_rows(std::span<const CellId> ids) const;

  // Bitwise equality, so NaN cells compare equal to NaN cells.
  friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b);

 private:
  std::vector<std::string> names_;
  std::vector<CellId> ids_;
  std::vector<double> values_;
};

// CSV with cell_id first then one column per feature; missing cells are blank.
std::string feature_matrix_to_csv(const FeatureMatrix& m);
FeatureMatrix load_feature_matrix(const std::string& path);

}  // namespace hotspot
