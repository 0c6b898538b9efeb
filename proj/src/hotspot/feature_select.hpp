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

namespace hotspot {

struct NormalizationStats {
  std::vector<std::string> features;
  std::vector<double> mean;
  std::vector<double> sd;      // sample sd (n - 1)
  std::vector<double> median;  // fill value for missing entries
  std::vector<std::uint8_t> constant;

  friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

// Column statistics over the finite entries of each column. Throws
// kInsufficientData below 2 rows.
NormalizationStats fit_normalizer(const FeatureMatrix& train);

// (x - mean) / sd with missing entries first replaced by the column median;
// constant columns become 0. Throws kSchema when the columns differ.
FeatureMatrix apply_normalizer(const FeatureMatrix& m, const NormalizationStats& stats);

// CSV: feature,mean,sd,median,constant
std::string normalizer_to_csv(const NormalizationStats& stats);
NormalizationStats load_normalizer(const std::string& path);

// Sample correlation. Throws kUndefined for a constant input and
// kInsufficientData for fewer than 2 pairs.
double pearson_r(std::span<const double> x, std::span<const double> y);

struct CorrelationPair {
  std::string feature_a;
  std::string feature_b;
  double r = 0.0;
};

struct CorrelationReport {
  std::vector<CorrelationPair> pairs;  // |r| descending
  std::vector<std::string> constant;   // columns skipped
};

// All column pairs with |r| >= threshold.
CorrelationReport correlation_report(const FeatureMatrix& m, double threshold);
std::string correlations_to_csv(const CorrelationReport& report);

struct RankedFeature {
  std::string name;
  double mean_decrease_gini = 0.0;
};

struct FeatureRanking {
  std::vector<RankedFeature> features;  // score descending, then name ascending

  double total() const;
};

FeatureRanking ranking_from_scores(std::span<const std::string> names,
                                   std::span<const double> scores);

// Fits a forest on every column of `train` and ranks by mean decrease in Gini.
FeatureRanking rank_by_gini(const FeatureMatrix& train, const LabelSet& labels,
                            const ForestParams& params, unsigned threads = 1);

// First k names of the ranking. Throws kConfig when k is 0 or too large.
std::vector<std::string> select_top_k(const FeatureRanking& ranking, std::size_t k);

// CSV: rank,feature,mean_decrease_gini,percent
std::string ranking_to_csv(const FeatureRanking& ranking);
FeatureRanking load_ranking(const std::string& path);

}  // namespace hotspot
