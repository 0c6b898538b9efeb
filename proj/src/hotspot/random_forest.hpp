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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hotspot/feature_matrix.hpp"
#include "hotspot/labeling.hpp"
#include "hotspot/rng.hpp"

namespace hotspot {

struct ForestParams {
  std::size_t n_trees = 500;
  std::optional<std::size_t> mtry;  // default floor(sqrt(p)), at least 1
  double subsample_fraction = 0.632;
  bool sample_with_replacement = false;
  std::optional<std::size_t> max_depth;  // root is depth 0
  std::size_t min_samples_leaf = 1;
  std::uint64_t seed = 1;

  std::size_t resolved_mtry(std::size_t n_features) const;
  // ceil(subsample_fraction * n)
  std::size_t subsample_size(std::size_t n_rows) const;
  // Throws kConfig.
  void validate(std::size_t n_features) const;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

// Column-major feature table with 0/1 labels.
class TrainingData {
 public:
  TrainingData() = default;
  TrainingData(std::size_t rows, std::size_t features);

  // Rows follow the matrix; every row needs a label and finite values.
  static TrainingData from(const FeatureMatrix& matrix, const LabelSet& labels);

  std::size_t rows() const { return rows_; }
  std::size_t features() const { return features_; }
  double value(std::size_t row, std::size_t feature) const {
    return columns_[feature * rows_ + row];
  }
  double& value(std::size_t row, std::size_t feature) { return columns_[feature * rows_ + row]; }
  std::uint8_t label(std::size_t row) const { return labels_[row]; }
  void set_label(std::size_t row, std::uint8_t label) { labels_[row] = label; }
  std::span<const std::uint8_t> labels() const { return labels_; }
  std::vector<double> row(std::size_t i) const;

 private:
  std::size_t rows_ = 0;
  std::size_t features_ = 0;
  std::vector<double> columns_;
  std::vector<std::uint8_t> labels_;
};

struct ClassCounts {
  std::uint64_t low = 0;
  std::uint64_t high = 0;
  std::uint64_t total() const { return low + high; }
};

// 1 - sum_c (n_c / n)^2. Throws kUndefined for an empty node.
double gini_impurity(ClassCounts counts);

// Improvements within this tolerance count as ties.
inline constexpr double kSplitTieTolerance = 1e-12;

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = 0.0;  // parent impurity minus weighted child impurity
};

// Exhaustive scan over midpoints between consecutive distinct values of each
// candidate feature. Rows with value <= threshold go left. Ties resolve to the
// lower feature index, then the lower threshold. nullopt when no split
// reduces impurity or respects min_samples_leaf.
std::optional<SplitCandidate> best_split(const TrainingData& data,
                                         std::span<const std::size_t> samples,
                                         std::span<const std::size_t> candidate_features,
                                         std::size_t min_samples_leaf = 1);

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t low = 0;   // in-bag samples of each class reaching the node
  std::uint32_t high = 0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;
  bool uses_feature(std::size_t feature) const;

  // Leaf reached by a row given as feature -> value accessor.
  template <typename ValueOf>
  const TreeNode& leaf(ValueOf&& value_of) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
      const TreeNode& n = nodes_[i];
      i = value_of(static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right;
    }
    return nodes_[i];
  }

  // Leaf majority, ties to low.
  template <typename ValueOf>
  std::uint8_t vote(ValueOf&& value_of) const {
    const TreeNode& n = leaf(value_of);
    return n.high > n.low ? 1 : 0;
  }

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

// CART growth on the (multi)set of in-bag rows. mtry candidate features are
// drawn without replacement from `rng` at every node that attempts a split.
DecisionTree grow_tree(const TrainingData& data, std::span<const std::size_t> in_bag,
                       const ForestParams& params, Rng& rng);

struct Prediction {
  CrimeClass cls = CrimeClass::kLow;
  double score = 0.0;  // fraction of trees voting high
};

struct ForestModel {
  ForestParams params;
  std::vector<std::string> feature_names;
  std::size_t n_train = 0;
  std::vector<DecisionTree> trees;
  std::vector<std::vector<std::uint8_t>> in_bag;  // per tree, 1 = row drawn

  // High iff score > 0.5. Throws kSchema when the row length is wrong.
  Prediction predict(std::span<const double> row) const;
  std::vector<Prediction> predict(const FeatureMatrix& matrix) const;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

// Trees are grown from Rng::stream(params.seed, tree index), so the result
// does not depend on `threads`. Throws kTraining when only one class is present.
ForestModel train(const TrainingData& data, std::vector<std::string> feature_names,
                  const ForestParams& params, unsigned threads = 1);
ForestModel train(const FeatureMatrix& matrix, const LabelSet& labels, const ForestParams& params,
                  unsigned threads = 1);

struct OobVotes {
  std::vector<std::uint32_t> high;   // per training row
  std::vector<std::uint32_t> total;  // trees for which the row is out-of-bag
};

struct OobResult {
  double error = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // rows in-bag for every tree
};

OobVotes oob_votes(const ForestModel& model, const TrainingData& data, unsigned threads = 1);
// Majority vote among out-of-bag trees, ties to low. Throws kCoverage when no
// row is out-of-bag anywhere.
OobResult oob_error(const ForestModel& model, const TrainingData& data, unsigned threads = 1);

struct ImportanceTable {
  std::vector<std::string> features;
  std::vector<double> mean_decrease_gini;
  std::vector<double> mean_decrease_accuracy;
  std::vector<double> mean_decrease_accuracy_low;   // class 0 column
  std::vector<double> mean_decrease_accuracy_high;  // class 1 column
};

// Per feature: sum over splits of (n_node / n_root) * impurity decrease,
// averaged over trees.
std::vector<double> importance_gini(const ForestModel& model);

struct PermutationImportance {
  std::vector<double> overall;
  std::vector<double> low;
  std::vector<double> high;
};

// Per tree: OOB accuracy minus OOB accuracy with the feature's OOB values
// permuted; averaged over trees (per class over trees with OOB rows of that
// class). Throws kCoverage like oob_error.
PermutationImportance importance_permutation(const ForestModel& model, const TrainingData& data,
                                             std::uint64_t seed, unsigned threads = 1);

ImportanceTable importance_table(const ForestModel& model, const TrainingData& data,
                                 std::uint64_t seed, unsigned threads = 1);

// Versioned text format; doubles use shortest round-trip decimals.
std::string model_to_text(const ForestModel& model);
ForestModel model_from_text(std::string_view text);
void save_model(const ForestModel& model, const std::string& path);
ForestModel load_model(const std::string& path);
std::uint64_t structural_hash(const ForestModel& model);

}  // namespace hotspot
