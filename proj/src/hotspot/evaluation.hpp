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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hotspot/feature_matrix.hpp"
#include "hotspot/labeling.hpp"
#include "hotspot/random_forest.hpp"
#include "hotspot/records.hpp"

namespace hotspot {

struct SplitPlan {
  std::vector<CellId> train;  // ascending
  std::vector<CellId> test;   // ascending
  std::uint64_t seed = 0;
};

// Uniform random partition with ceil(fraction * n) training cells. Throws
// kInsufficientData below 5 cells and kConfig for a fraction outside (0, 1).
SplitPlan split_cells(std::span<const CellId> cells, double fraction, std::uint64_t seed);

// k folds whose sizes differ by at most one; the first n % k folds hold the
// extra cell. Plan i tests on fold i. Throws kConfig unless 2 <= k <= n.
std::vector<SplitPlan> kfold(std::span<const CellId> cells, std::size_t k, std::uint64_t seed);

// CSV: cell_id,split with split in {train,test}
std::string split_to_csv(const SplitPlan& plan);
SplitPlan load_split(const std::string& path);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Exact Clopper-Pearson interval for a binomial proportion.
Interval accuracy_ci(std::uint64_t correct, std::uint64_t n, double level = 0.95);

// Positive class is high.
struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  std::uint64_t correct() const { return tp + tn; }
};

Confusion confusion_of(std::span<const std::uint8_t> predicted,
                       std::span<const std::uint8_t> truth);

// Percent; 0 when precision + recall is 0.
double f1_percent(const Confusion& c);

// Mann-Whitney estimate with midranks. Throws kUndefined when truth holds a
// single class.
double auc(std::span<const double> scores, std::span<const std::uint8_t> truth);

struct EvaluationReport {
  std::string model;
  double accuracy = 0.0;  // percent
  Interval accuracy_ci;   // proportions
  double f1 = 0.0;        // percent
  double auc = 0.5;
  Confusion confusion;
  std::size_t n_test = 0;
};

EvaluationReport evaluate_scores(std::string model, std::span<const double> scores,
                                 std::span<const std::uint8_t> truth);

// Always predicts the training majority (ties to low) with a constant score.
EvaluationReport majority_baseline(std::span<const std::uint8_t> train_labels,
                                   std::span<const std::uint8_t> test_labels);

// Scores the test cells of `plan`, taking the model's columns from `matrix`.
EvaluationReport evaluate(std::string name, const ForestModel& model, const FeatureMatrix& matrix,
                          const LabelSet& labels, const SplitPlan& plan);

// Labels of `ids` as 0/1; throws kSchema for unlabeled cells.
std::vector<std::uint8_t> labels_of(const LabelSet& labels, std::span<const CellId> ids);

// CSV: model,accuracy,ci_lo,ci_hi,f1,auc
std::string reports_to_csv(std::span<const EvaluationReport> reports);
std::string reports_to_text(std::span<const EvaluationReport> reports);

}  // namespace hotspot
