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

#include "hotspot/random_forest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

#include "hotspot/error.hpp"
#include "hotspot/parallel.hpp"
#include "hotspot/text.hpp"

namespace hotspot {

std::size_t ForestParams::resolved_mtry(std::size_t n_features) const {
  if (mtry) return *mtry;
  const auto root = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features))));
  return std::max<std::size_t>(1, root);
}

std::size_t ForestParams::subsample_size(std::size_t n_rows) const {
  // The epsilon keeps 0.632 * 1000 from rounding up to 633.
  const double raw = subsample_fraction * static_cast<double>(n_rows);
  const auto size = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::clamp<std::size_t>(size, 1, n_rows);
}

void ForestParams::validate(std::size_t n_features) const {
  if (n_trees == 0) fail(ErrorKind::kConfig, "n_trees must be positive");
  if (n_features == 0) fail(ErrorKind::kConfig, "no features to train on");
  if (mtry && (*mtry == 0 || *mtry > n_features))
    fail(ErrorKind::kConfig, "mtry must lie in [1, " + std::to_string(n_features) + "]");
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0))
    fail(ErrorKind::kConfig, "subsample_fraction must lie in (0, 1]");
  if (min_samples_leaf == 0) fail(ErrorKind::kConfig, "min_samples_leaf must be positive");
}

TrainingData::TrainingData(std::size_t rows, std::size_t features)
    : rows_(rows), features_(features), columns_(rows * features, 0.0), labels_(rows, 0) {}

TrainingData TrainingData::from(const FeatureMatrix& matrix, const LabelSet& labels) {
  TrainingData data(matrix.rows(), matrix.cols());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    auto it = labels.labels.find(matrix.ids()[i]);
    if (it == labels.labels.end())
      fail(ErrorKind::kSchema,
           "cell " + std::to_string(to_u64(matrix.ids()[i])) + " has no label");
    data.labels_[i] = static_cast<std::uint8_t>(it->second);
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      const double v = matrix.at(i, j);
      if (!std::isfinite(v))
        fail(ErrorKind::kInput, "non-finite value in feature '" + matrix.names()[j] +
                                    "'; impute before training");
      data.value(i, j) = v;
    }
  }
  return data;
}

std::vector<double> TrainingData::row(std::size_t i) const {
  std::vector<double> out(features_);
  for (std::size_t f = 0; f < features_; ++f) out[f] = value(i, f);
  return out;
}

double gini_impurity(ClassCounts counts) {
  const auto n = counts.total();
  if (n == 0) fail(ErrorKind::kUndefined, "impurity of an empty node");
  const double p0 = static_cast<double>(counts.low) / static_cast<double>(n);
  const double p1 = static_cast<double>(counts.high) / static_cast<double>(n);
  return 1.0 - (p0 * p0 + p1 * p1);
}

namespace {

double midpoint(double a, double b) {
  const double mid = (a + b) / 2.0;
  return mid < b ? mid : a;
}

double weighted_decrease(double parent, ClassCounts left, ClassCounts right) {
  const double n = static_cast<double>(left.total() + right.total());
  return parent - static_cast<double>(left.total()) / n * gini_impurity(left) -
         static_cast<double>(right.total()) / n * gini_impurity(right);
}

struct Scratch {
  std::vector<std::pair<double, std::uint8_t>> pairs;
  std::vector<std::size_t> candidates;
};

std::optional<SplitCandidate> best_split_impl(const TrainingData& data,
                                              std::span<const std::size_t> samples,
                                              std::span<const std::size_t> sorted_features,
                                              std::size_t min_leaf, Scratch& scratch) {
  const std::size_t n = samples.size();
  if (n < 2) return std::nullopt;
  ClassCounts parent;
  for (auto s : samples) (data.label(s) ? parent.high : parent.low)++;
  if (parent.low == 0 || parent.high == 0) return std::nullopt;
  const double parent_gini = gini_impurity(parent);

  std::optional<SplitCandidate> best;
  auto& pairs = scratch.pairs;
  for (const std::size_t f : sorted_features) {
    pairs.clear();
    for (auto s : samples) pairs.emplace_back(data.value(s, f), data.label(s));
    std::sort(pairs.begin(), pairs.end());
    ClassCounts left;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      (pairs[i].second ? left.high : left.low)++;
      if (!(pairs[i].first < pairs[i + 1].first)) continue;
      const std::size_t n_left = i + 1;
      if (n_left < min_leaf || n - n_left < min_leaf) continue;
      const ClassCounts right{parent.low - left.low, parent.high - left.high};
      const double decrease = weighted_decrease(parent_gini, left, right);
      const double bar = best ? best->decrease : 0.0;
      if (decrease > bar + kSplitTieTolerance)
        best = SplitCandidate{f, midpoint(pairs[i].first, pairs[i + 1].first), decrease};
    }
  }
  return best;
}

}  // namespace

std::optional<SplitCandidate> best_split(const TrainingData& data,
                                         std::span<const std::size_t> samples,
                                         std::span<const std::size_t> candidate_features,
                                         std::size_t min_samples_leaf) {
  std::vector<std::size_t> sorted(candidate_features.begin(), candidate_features.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto f : sorted)
    if (f >= data.features()) fail(ErrorKind::kConfig, "candidate feature out of range");
  Scratch scratch;
  return best_split_impl(data, samples, sorted, std::max<std::size_t>(1, min_samples_leaf),
                         scratch);
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> depth_of(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, depth_of[i]);
    if (!nodes_[i].is_leaf()) {
      depth_of[nodes_[i].left] = depth_of[i] + 1;
      depth_of[nodes_[i].right] = depth_of[i] + 1;
    }
  }
  return deepest;
}

bool DecisionTree::uses_feature(std::size_t feature) const {
  return std::any_of(nodes_.begin(), nodes_.end(), [&](const TreeNode& n) {
    return !n.is_leaf() && static_cast<std::size_t>(n.feature) == feature;
  });
}

DecisionTree grow_tree(const TrainingData& data, std::span<const std::size_t> in_bag,
                       const ForestParams& params, Rng& rng) {
  if (in_bag.empty()) fail(ErrorKind::kTraining, "cannot grow a tree on an empty sample");
  const std::size_t p = data.features();
  const std::size_t mtry = params.resolved_mtry(p);
  const std::size_t min_leaf = std::max<std::size_t>(1, params.min_samples_leaf);

  std::vector<std::size_t> work(in_bag.begin(), in_bag.end());
  std::vector<std::size_t> pool(p);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  Scratch scratch;

  auto counts_of = [&](std::size_t begin, std::size_t end) {
    TreeNode node;
    for (std::size_t i = begin; i < end; ++i) (data.label(work[i]) ? node.high : node.low)++;
    return node;
  };

  std::vector<TreeNode> nodes;
  nodes.push_back(counts_of(0, work.size()));
  struct Pending {
    std::size_t node, begin, end, depth;
  };
  std::vector<Pending> stack{{0, 0, work.size(), 0}};
  while (!stack.empty()) {
    const Pending cur = stack.back();
    stack.pop_back();
    const std::size_t n = cur.end - cur.begin;
    const TreeNode& here = nodes[cur.node];
    if (here.low == 0 || here.high == 0) continue;
    if (n < 2 * min_leaf) continue;
    if (params.max_depth && cur.depth >= *params.max_depth) continue;

    rng.partial_shuffle(std::span<std::size_t>(pool), mtry);
    scratch.candidates.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(mtry));
    std::sort(scratch.candidates.begin(), scratch.candidates.end());
    const auto split = best_split_impl(
        data, std::span<const std::size_t>(work.data() + cur.begin, n), scratch.candidates,
        min_leaf, scratch);
    if (!split) continue;

    const auto mid = std::partition(
        work.begin() + static_cast<std::ptrdiff_t>(cur.begin),
        work.begin() + static_cast<std::ptrdiff_t>(cur.end),
        [&](std::size_t s) { return data.value(s, split->feature) <= split->threshold; });
    const auto split_at = static_cast<std::size_t>(mid - work.begin());

    const auto left = static_cast<std::uint32_t>(nodes.size());
    nodes[cur.node].feature = static_cast<std::int32_t>(split->feature);
    nodes[cur.node].threshold = split->threshold;
    nodes[cur.node].left = left;
    nodes[cur.node].right = left + 1;
    nodes.push_back(counts_of(cur.begin, split_at));
    nodes.push_back(counts_of(split_at, cur.end));
    // Right pushed first so the left subtree is expanded next.
    stack.push_back({left + 1, split_at, cur.end, cur.depth + 1});
    stack.push_back({left, cur.begin, split_at, cur.depth + 1});
  }
  return DecisionTree(std::move(nodes));
}

Prediction ForestModel::predict(std::span<const double> row) const {
  if (row.size() != feature_names.size())
    fail(ErrorKind::kSchema, "row has " + std::to_string(row.size()) + " values, model expects " +
                                 std::to_string(feature_names.size()));
  std::size_t high = 0;
  for (const auto& tree : trees) high += tree.vote([&](std::size_t f) { return row[f]; });
  Prediction p;
  p.score = trees.empty() ? 0.0 : static_cast<double>(high) / static_cast<double>(trees.size());
  p.cls = p.score > 0.5 ? CrimeClass::kHigh : CrimeClass::kLow;
  return p;
}

std::vector<Prediction> ForestModel::predict(const FeatureMatrix& matrix) const {
  if (matrix.names() != feature_names)
    fail(ErrorKind::kSchema, "feature matrix columns do not match the model");
  std::vector<Prediction> out;
  out.reserve(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i) out.push_back(predict(matrix.row(i)));
  return out;
}

ForestModel train(const TrainingData& data, std::vector<std::string> feature_names,
                  const ForestParams& params, unsigned threads) {
  params.validate(data.features());
  if (feature_names.size() != data.features())
    fail(ErrorKind::kSchema, "feature name count does not match the data");
  const std::size_t n = data.rows();
  std::size_t high = 0;
  for (auto l : data.labels()) high += l;
  if (n == 0 || high == 0 || high == n)
    fail(ErrorKind::kTraining, "training labels contain a single class");

  ForestModel model;
  model.params = params;
  model.feature_names = std::move(feature_names);
  model.n_train = n;
  model.trees.resize(params.n_trees);
  model.in_bag.resize(params.n_trees);
  const std::size_t m = params.subsample_size(n);

  parallel_for(params.n_trees, threads, [&](std::size_t t) {
    Rng rng = Rng::stream(params.seed, t);
    std::vector<std::size_t> bag;
    if (params.sample_with_replacement) {
      bag.resize(m);
      for (auto& b : bag) b = static_cast<std::size_t>(rng.below(n));
    } else {
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      rng.partial_shuffle(std::span<std::size_t>(idx), m);
      bag.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m));
    }
    std::sort(bag.begin(), bag.end());
    auto& flags = model.in_bag[t];
    flags.assign(n, 0);
    for (auto b : bag) flags[b] = 1;
    model.trees[t] = grow_tree(data, bag, params, rng);
  });
  return model;
}

ForestModel train(const FeatureMatrix& matrix, const LabelSet& labels, const ForestParams& params,
                  unsigned threads) {
  return train(TrainingData::from(matrix, labels), matrix.names(), params, threads);
}

namespace {

void check_training_shape(const ForestModel& model, const TrainingData& data) {
  if (data.rows() != model.n_train || data.features() != model.feature_names.size())
    fail(ErrorKind::kSchema, "data does not match the model's training set");
}

}  // namespace

OobVotes oob_votes(const ForestModel& model, const TrainingData& data, unsigned threads) {
  check_training_shape(model, data);
  OobVotes votes;
  votes.high.assign(data.rows(), 0);
  votes.total.assign(data.rows(), 0);
  parallel_for(data.rows(), threads, [&](std::size_t i) {
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
      if (model.in_bag[t][i]) continue;
      ++votes.total[i];
      votes.high[i] += model.trees[t].vote([&](std::size_t f) { return data.value(i, f); });
    }
  });
  return votes;
}

OobResult oob_error(const ForestModel& model, const TrainingData& data, unsigned threads) {
  const auto votes = oob_votes(model, data, threads);
  OobResult r;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (votes.total[i] == 0) {
      ++r.skipped;
      continue;
    }
    ++r.evaluated;
    const std::uint8_t predicted = 2 * votes.high[i] > votes.total[i] ? 1 : 0;
    wrong += predicted != data.label(i);
  }
  if (r.evaluated == 0) fail(ErrorKind::kCoverage, "no row is out-of-bag for any tree");
  r.error = static_cast<double>(wrong) / static_cast<double>(r.evaluated);
  return r;
}

std::vector<double> importance_gini(const ForestModel& model) {
  const std::size_t p = model.feature_names.size();
  std::vector<double> total(p, 0.0);
  for (const auto& tree : model.trees) {
    const auto& nodes = tree.nodes();
    if (nodes.empty()) continue;
    const double root = static_cast<double>(nodes[0].low + nodes[0].high);
    std::vector<double> per_tree(p, 0.0);
    for (const auto& node : nodes) {
      if (node.is_leaf()) continue;
      const TreeNode& l = nodes[node.left];
      const TreeNode& r = nodes[node.right];
      const double parent = gini_impurity({node.low, node.high});
      const double decrease = weighted_decrease(parent, {l.low, l.high}, {r.low, r.high});
      per_tree[static_cast<std::size_t>(node.feature)] +=
          static_cast<double>(node.low + node.high) / root * decrease;
    }
    for (std::size_t f = 0; f < p; ++f) total[f] += per_tree[f];
  }
  if (!model.trees.empty())
    for (auto& v : total) v /= static_cast<double>(model.trees.size());
  return total;
}

PermutationImportance importance_permutation(const ForestModel& model, const TrainingData& data,
                                             std::uint64_t seed, unsigned threads) {
  check_training_shape(model, data);
  const std::size_t p = data.features();
  struct Drop {
    std::size_t feature;
    double overall, low, high;
  };
  struct TreeResult {
    bool any = false, any_low = false, any_high = false;
    std::vector<Drop> drops;
  };
  std::vector<TreeResult> results(model.trees.size());

  parallel_for(model.trees.size(), threads, [&](std::size_t t) {
    const auto& tree = model.trees[t];
    std::vector<std::size_t> oob;
    for (std::size_t i = 0; i < data.rows(); ++i)
      if (!model.in_bag[t][i]) oob.push_back(i);
    TreeResult& res = results[t];
    if (oob.empty()) return;
    std::size_t n_low = 0, n_high = 0;
    for (auto i : oob) (data.label(i) ? n_high : n_low)++;
    res.any = true;
    res.any_low = n_low > 0;
    res.any_high = n_high > 0;

    auto accuracy = [&](auto&& value_of) {
      std::size_t ok_low = 0, ok_high = 0;
      for (std::size_t k = 0; k < oob.size(); ++k) {
        const std::size_t i = oob[k];
        const auto v = tree.vote([&](std::size_t f) { return value_of(k, i, f); });
        if (v == data.label(i)) (v ? ok_high : ok_low)++;
      }
      return std::array<double, 3>{
          static_cast<double>(ok_low + ok_high) / static_cast<double>(oob.size()),
          n_low ? static_cast<double>(ok_low) / static_cast<double>(n_low) : 0.0,
          n_high ? static_cast<double>(ok_high) / static_cast<double>(n_high) : 0.0};
    };
    const auto base = accuracy([&](std::size_t, std::size_t i, std::size_t f) {
      return data.value(i, f);
    });

    std::vector<std::size_t> used;
    for (const auto& node : tree.nodes())
      if (!node.is_leaf()) used.push_back(static_cast<std::size_t>(node.feature));
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());

    std::vector<double> permuted(oob.size());
    for (const std::size_t f : used) {
      for (std::size_t k = 0; k < oob.size(); ++k) permuted[k] = data.value(oob[k], f);
      Rng rng = Rng::stream(hash_combine(seed, t), f);
      rng.shuffle(std::span<double>(permuted));
      const auto after = accuracy([&](std::size_t k, std::size_t i, std::size_t g) {
        return g == f ? permuted[k] : data.value(i, g);
      });
      res.drops.push_back({f, base[0] - after[0], base[1] - after[1], base[2] - after[2]});
    }
  });

  PermutationImportance out;
  out.overall.assign(p, 0.0);
  out.low.assign(p, 0.0);
  out.high.assign(p, 0.0);
  std::size_t trees = 0, trees_low = 0, trees_high = 0;
  for (const auto& res : results) {
    trees += res.any;
    trees_low += res.any_low;
    trees_high += res.any_high;
    for (const auto& d : res.drops) {
      out.overall[d.feature] += d.overall;
      if (res.any_low) out.low[d.feature] += d.low;
      if (res.any_high) out.high[d.feature] += d.high;
    }
  }
  if (trees == 0) fail(ErrorKind::kCoverage, "no tree has out-of-bag rows");
  for (std::size_t f = 0; f < p; ++f) {
    out.overall[f] /= static_cast<double>(trees);
    out.low[f] = trees_low ? out.low[f] / static_cast<double>(trees_low) : 0.0;
    out.high[f] = trees_high ? out.high[f] / static_cast<double>(trees_high) : 0.0;
  }
  return out;
}

ImportanceTable importance_table(const ForestModel& model, const TrainingData& data,
                                 std::uint64_t seed, unsigned threads) {
  ImportanceTable table;
  table.features = model.feature_names;
  table.mean_decrease_gini = importance_gini(model);
  auto perm = importance_permutation(model, data, seed, threads);
  table.mean_decrease_accuracy = std::move(perm.overall);
  table.mean_decrease_accuracy_low = std::move(perm.low);
  table.mean_decrease_accuracy_high = std::move(perm.high);
  return table;
}

namespace {

constexpr std::string_view kModelMagic = "hotspot-forest 1";

std::string optional_size(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string("none");
}

void append_hex(std::string& out, const std::vector<std::uint8_t>& flags) {
  static constexpr char kDigits[] = "0123456789abcdef";
  for (std::size_t i = 0; i < flags.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4 && i + b < flags.size(); ++b)
      nibble |= static_cast<unsigned>(flags[i + b] != 0) << b;
    out += kDigits[nibble];
  }
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view next() {
    if (pos_ >= text_.size()) bad("unexpected end of model");
    auto end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    std::string_view line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }

  // Splits the next line on spaces and checks the leading keyword.
  std::vector<std::string> expect(std::string_view keyword, std::size_t fields) {
    auto parts = split(next(), ' ');
    if (parts.empty() || parts[0] != keyword || parts.size() != fields)
      bad("expected '" + std::string(keyword) + "' record");
    return parts;
  }

  [[noreturn]] void bad(const std::string& what) const {
    fail(ErrorKind::kSchema, "model line " + std::to_string(line_) + ": " + what);
  }

  std::uint64_t to_uint(std::string_view s) const {
    auto v = parse_uint(s);
    if (!v) bad("bad integer '" + std::string(s) + "'");
    return *v;
  }
  double to_double(std::string_view s) const {
    auto v = parse_double(s);
    if (!v) bad("bad number '" + std::string(s) + "'");
    return *v;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

}  // namespace

std::string model_to_text(const ForestModel& model) {
  const auto& p = model.params;
  std::string out(kModelMagic);
  out += "\nparams n_trees=" + std::to_string(p.n_trees) + " mtry=" + optional_size(p.mtry) +
         " subsample=" + format_double(p.subsample_fraction) +
         " replacement=" + (p.sample_with_replacement ? "1" : "0") +
         " max_depth=" + optional_size(p.max_depth) +
         " min_leaf=" + std::to_string(p.min_samples_leaf) + " seed=" + std::to_string(p.seed);
  out += "\nn_train " + std::to_string(model.n_train);
  out += "\nfeatures " + std::to_string(model.feature_names.size()) + "\n";
  for (const auto& name : model.feature_names) out += name + "\n";
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const auto& nodes = model.trees[t].nodes();
    out += "tree " + std::to_string(t) + " " + std::to_string(nodes.size()) + "\ninbag ";
    append_hex(out, model.in_bag[t]);
    out += '\n';
    for (const auto& n : nodes) {
      out += std::to_string(n.feature);
      out += ' ';
      append_double(out, n.threshold);
      out += ' ' + std::to_string(n.left) + ' ' + std::to_string(n.right) + ' ' +
             std::to_string(n.low) + ' ' + std::to_string(n.high) + '\n';
    }
  }
  out += "end\n";
  return out;
}

ForestModel model_from_text(std::string_view text) {
  LineReader in(text);
  if (in.next() != kModelMagic) in.bad("not a hotspot forest model (or unsupported version)");

  ForestModel model;
  auto& p = model.params;
  const auto params = in.expect("params", 8);
  auto field = [&](std::size_t i, std::string_view key) {
    const std::string& part = params[i];
    if (part.size() <= key.size() || part.compare(0, key.size(), key) != 0 ||
        part[key.size()] != '=')
      in.bad("expected parameter '" + std::string(key) + "'");
    return std::string_view(part).substr(key.size() + 1);
  };
  auto optional_field = [&](std::size_t i, std::string_view key) -> std::optional<std::size_t> {
    const auto v = field(i, key);
    if (v == "none") return std::nullopt;
    return in.to_uint(v);
  };
  p.n_trees = in.to_uint(field(1, "n_trees"));
  p.mtry = optional_field(2, "mtry");
  p.subsample_fraction = in.to_double(field(3, "subsample"));
  const auto replacement = field(4, "replacement");
  if (replacement != "0" && replacement != "1") in.bad("replacement must be 0 or 1");
  p.sample_with_replacement = replacement == "1";
  p.max_depth = optional_field(5, "max_depth");
  p.min_samples_leaf = in.to_uint(field(6, "min_leaf"));
  p.seed = in.to_uint(field(7, "seed"));

  model.n_train = in.to_uint(in.expect("n_train", 2)[1]);
  const auto n_features = in.to_uint(in.expect("features", 2)[1]);
  for (std::uint64_t f = 0; f < n_features; ++f) model.feature_names.emplace_back(in.next());
  p.validate(model.feature_names.size());

  const std::size_t hex_len = (model.n_train + 3) / 4;
  for (std::size_t t = 0; t < p.n_trees; ++t) {
    const auto header = in.expect("tree", 3);
    if (in.to_uint(header[1]) != t) in.bad("trees out of order");
    const auto n_nodes = in.to_uint(header[2]);
    if (n_nodes == 0) in.bad("tree without nodes");

    const auto bag = in.expect("inbag", 2)[1];
    if (bag.size() != hex_len) in.bad("in-bag bitmap has the wrong length");
    std::vector<std::uint8_t> flags(model.n_train, 0);
    for (std::size_t i = 0; i < bag.size(); ++i) {
      unsigned nibble = 0;
      const auto [ptr, ec] = std::from_chars(bag.data() + i, bag.data() + i + 1, nibble, 16);
      if (ec != std::errc()) in.bad("bad in-bag bitmap");
      for (std::size_t b = 0; b < 4 && 4 * i + b < model.n_train; ++b)
        flags[4 * i + b] = (nibble >> b) & 1u;
    }
    model.in_bag.push_back(std::move(flags));

    std::vector<TreeNode> nodes;
    nodes.reserve(n_nodes);
    for (std::uint64_t k = 0; k < n_nodes; ++k) {
      const auto parts = split(in.next(), ' ');
      if (parts.size() != 6) in.bad("node record needs 6 fields");
      TreeNode node;
      const auto feature = parse_int(parts[0]);
      if (!feature || *feature < -1 || *feature >= static_cast<std::int64_t>(n_features))
        in.bad("node feature out of range");
      node.feature = static_cast<std::int32_t>(*feature);
      node.threshold = in.to_double(parts[1]);
      node.left = static_cast<std::uint32_t>(in.to_uint(parts[2]));
      node.right = static_cast<std::uint32_t>(in.to_uint(parts[3]));
      node.low = static_cast<std::uint32_t>(in.to_uint(parts[4]));
      node.high = static_cast<std::uint32_t>(in.to_uint(parts[5]));
      if (!node.is_leaf() && (node.left <= k || node.right <= k || node.left >= n_nodes ||
                              node.right >= n_nodes))
        in.bad("child index out of range");
      nodes.push_back(node);
    }
    model.trees.emplace_back(std::move(nodes));
  }
  if (in.next() != "end") in.bad("expected 'end'");
  return model;
}

void save_model(const ForestModel& model, const std::string& path) {
  write_file(path, model_to_text(model));
}

ForestModel load_model(const std::string& path) { return model_from_text(read_file(path)); }

std::uint64_t structural_hash(const ForestModel& model) {
  return hash_string(model_to_text(model));
}

}  // namespace hotspot
