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

#include "hotspot/evaluation.hpp"

#include <algorithm>
#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "hotspot/error.hpp"
#include "hotspot/rng.hpp"
#include "hotspot/text.hpp"

namespace hotspot {

namespace {

std::vector<CellId> shuffled(std::span<const CellId> cells, std::uint64_t seed) {
  std::vector<CellId> ids(cells.begin(), cells.end());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    fail(ErrorKind::kInput, "duplicate cell ids in split input");
  Rng rng(seed);
  rng.shuffle(std::span<CellId>(ids));
  return ids;
}

}  // namespace

SplitPlan split_cells(std::span<const CellId> cells, double fraction, std::uint64_t seed) {
  if (cells.size() < 5)
    fail(ErrorKind::kInsufficientData, "a train/test split needs at least 5 cells");
  if (!(fraction > 0.0 && fraction < 1.0))
    fail(ErrorKind::kConfig, "split fraction must lie in (0, 1)");
  auto ids = shuffled(cells, seed);
  const auto n_train = std::min(
      ids.size() - 1,
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(ids.size()) - 1e-9)));
  SplitPlan plan;
  plan.seed = seed;
  plan.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  plan.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

std::vector<SplitPlan> kfold(std::span<const CellId> cells, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > cells.size())
    fail(ErrorKind::kConfig, "k must lie in [2, " + std::to_string(cells.size()) + "]");
  const auto ids = shuffled(cells, seed);
  std::vector<SplitPlan> plans(k);
  std::size_t begin = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t size = ids.size() / k + (i < ids.size() % k ? 1 : 0);
    auto& plan = plans[i];
    plan.seed = seed;
    for (std::size_t j = 0; j < ids.size(); ++j)
      (j >= begin && j < begin + size ? plan.test : plan.train).push_back(ids[j]);
    std::sort(plan.train.begin(), plan.train.end());
    std::sort(plan.test.begin(), plan.test.end());
    begin += size;
  }
  return plans;
}

std::string split_to_csv(const SplitPlan& plan) {
  std::vector<std::pair<CellId, bool>> rows;
  for (auto id : plan.train) rows.emplace_back(id, false);
  for (auto id : plan.test) rows.emplace_back(id, true);
  std::sort(rows.begin(), rows.end());
  std::string out = "cell_id,split\n";
  for (const auto& [id, test] : rows)
    out += std::to_string(to_u64(id)) + (test ? ",test\n" : ",train\n");
  return out;
}

SplitPlan load_split(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row)) fail(ErrorKind::kSchema, path + ": empty split file");
  const auto col = require_columns(row, {"cell_id", "split"}, path);
  SplitPlan plan;
  while (reader.next(row)) {
    const auto where = path + ":" + std::to_string(reader.line());
    if (row.size() <= std::max(col[0], col[1])) fail(ErrorKind::kSchema, where + ": short row");
    const auto id = parse_uint(row[col[0]]);
    if (!id) fail(ErrorKind::kInput, where + ": bad cell_id");
    if (row[col[1]] == "train")
      plan.train.push_back(CellId{*id});
    else if (row[col[1]] == "test")
      plan.test.push_back(CellId{*id});
    else
      fail(ErrorKind::kInput, where + ": split must be train or test");
  }
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

Interval accuracy_ci(std::uint64_t correct, std::uint64_t n, double level) {
  if (n == 0) fail(ErrorKind::kInsufficientData, "confidence interval of an empty sample");
  if (correct > n) fail(ErrorKind::kInput, "more successes than trials");
  if (!(level > 0.0 && level < 1.0)) fail(ErrorKind::kConfig, "level must lie in (0, 1)");
  const double alpha = 1.0 - level;
  const auto k = static_cast<double>(correct);
  const auto m = static_cast<double>(n);
  Interval ci;
  if (correct > 0)
    ci.lo = boost::math::quantile(boost::math::beta_distribution<double>(k, m - k + 1.0),
                                  alpha / 2.0);
  if (correct < n)
    ci.hi = boost::math::quantile(boost::math::beta_distribution<double>(k + 1.0, m - k),
                                  1.0 - alpha / 2.0);
  // Keep the point estimate inside despite quantile rounding.
  ci.lo = std::min(ci.lo, k / m);
  ci.hi = std::max(ci.hi, k / m);
  return ci;
}

Confusion confusion_of(std::span<const std::uint8_t> predicted,
                       std::span<const std::uint8_t> truth) {
  if (predicted.size() != truth.size())
    fail(ErrorKind::kSchema, "predictions and truth differ in length");
  Confusion c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i])
      (truth[i] ? c.tp : c.fp)++;
    else
      (truth[i] ? c.fn : c.tn)++;
  }
  return c;
}

double f1_percent(const Confusion& c) {
  const double denominator = static_cast<double>(2 * c.tp + c.fp + c.fn);
  if (c.tp == 0 || denominator == 0.0) return 0.0;
  return 100.0 * 2.0 * static_cast<double>(c.tp) / denominator;
}

double auc(std::span<const double> scores, std::span<const std::uint8_t> truth) {
  if (scores.size() != truth.size()) fail(ErrorKind::kSchema, "scores and truth differ in length");
  const auto n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::uint64_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t)
      if (truth[order[t]]) {
        rank_sum += midrank;
        ++positives;
      }
    i = j;
  }
  const std::uint64_t negatives = n - positives;
  if (positives == 0 || negatives == 0)
    fail(ErrorKind::kUndefined, "AUC needs both classes in the truth labels");
  const auto p = static_cast<double>(positives);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

EvaluationReport evaluate_scores(std::string model, std::span<const double> scores,
                                 std::span<const std::uint8_t> truth) {
  if (truth.empty()) fail(ErrorKind::kInsufficientData, "no test rows to evaluate");
  std::vector<std::uint8_t> predicted(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] > 0.5 ? 1 : 0;
  EvaluationReport r;
  r.model = std::move(model);
  r.confusion = confusion_of(predicted, truth);
  r.n_test = truth.size();
  r.accuracy = 100.0 * static_cast<double>(r.confusion.correct()) / static_cast<double>(r.n_test);
  r.accuracy_ci = accuracy_ci(r.confusion.correct(), r.n_test);
  r.f1 = f1_percent(r.confusion);
  r.auc = auc(scores, truth);
  return r;
}

EvaluationReport majority_baseline(std::span<const std::uint8_t> train_labels,
                                   std::span<const std::uint8_t> test_labels) {
  const auto high = static_cast<std::size_t>(
      std::count(train_labels.begin(), train_labels.end(), std::uint8_t{1}));
  const double score = 2 * high > train_labels.size() ? 1.0 : 0.0;
  const std::vector<double> scores(test_labels.size(), score);
  return evaluate_scores("baseline", scores, test_labels);
}

std::vector<std::uint8_t> labels_of(const LabelSet& labels, std::span<const CellId> ids) {
  std::vector<std::uint8_t> out;
  out.reserve(ids.size());
  for (auto id : ids) {
    auto it = labels.labels.find(id);
    if (it == labels.labels.end())
      fail(ErrorKind::kSchema, "cell " + std::to_string(to_u64(id)) + " has no label");
    out.push_back(static_cast<std::uint8_t>(it->second));
  }
  return out;
}

EvaluationReport evaluate(std::string name, const ForestModel& model, const FeatureMatrix& matrix,
                          const LabelSet& labels, const SplitPlan& plan) {
  const auto test = matrix.select_rows(plan.test).select_columns(model.feature_names);
  std::vector<double> scores;
  scores.reserve(test.rows());
  for (std::size_t i = 0; i < test.rows(); ++i) scores.push_back(model.predict(test.row(i)).score);
  return evaluate_scores(std::move(name), scores, labels_of(labels, plan.test));
}

std::string reports_to_csv(std::span<const EvaluationReport> reports) {
  std::string out = "model,accuracy,ci_lo,ci_hi,f1,auc\n";
  char line[256];
  for (const auto& r : reports) {
    append_csv_field(out, r.model);
    std::snprintf(line, sizeof line, ",%.2f,%.4f,%.4f,%.2f,%.4f\n", r.accuracy, r.accuracy_ci.lo,
                  r.accuracy_ci.hi, r.f1, r.auc);
    out += line;
  }
  return out;
}

std::string reports_to_text(std::span<const EvaluationReport> reports) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %8s  %-16s %7s %6s %6s\n", "model", "acc,%",
                "acc CI 95%", "F1,%", "AUC", "n");
  out += line;
  for (const auto& r : reports) {
    char ci[64];
    std::snprintf(ci, sizeof ci, "(%.2f, %.2f)", r.accuracy_ci.lo, r.accuracy_ci.hi);
    std::snprintf(line, sizeof line, "%-12s %8.2f  %-16s %7.2f %6.2f %6zu\n", r.model.c_str(),
                  r.accuracy, ci, r.f1, r.auc, r.n_test);
    out += line;
  }
  return out;
}

}  // namespace hotspot
