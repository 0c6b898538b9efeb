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

#include "hotspot/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hotspot/error.hpp"
#include "hotspot/text.hpp"

namespace hotspot {

NormalizationStats fit_normalizer(const FeatureMatrix& train) {
  if (train.rows() < 2)
    fail(ErrorKind::kInsufficientData, "normalization needs at least 2 training rows");
  NormalizationStats stats;
  stats.features = train.names();
  std::vector<double> values;
  for (std::size_t j = 0; j < train.cols(); ++j) {
    values.clear();
    for (std::size_t i = 0; i < train.rows(); ++i)
      if (std::isfinite(train.at(i, j))) values.push_back(train.at(i, j));
    double mean = 0.0, sd = 0.0, median = 0.0;
    if (!values.empty()) {
      mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
      }
      std::sort(values.begin(), values.end());
      median = quantile_type7(values, 0.5);
      if (values.front() == values.back()) sd = 0.0;
    }
    stats.mean.push_back(mean);
    stats.sd.push_back(sd);
    stats.median.push_back(median);
    stats.constant.push_back(sd == 0.0 ? 1 : 0);
  }
  return stats;
}

FeatureMatrix apply_normalizer(const FeatureMatrix& m, const NormalizationStats& stats) {
  if (m.names() != stats.features)
    fail(ErrorKind::kSchema, "matrix columns do not match the normalizer");
  FeatureMatrix out(m.names(), m.ids());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (stats.constant[j]) {
        out.at(i, j) = 0.0;
        continue;
      }
      const double x = std::isfinite(m.at(i, j)) ? m.at(i, j) : stats.median[j];
      out.at(i, j) = (x - stats.mean[j]) / stats.sd[j];
    }
  return out;
}

std::string normalizer_to_csv(const NormalizationStats& stats) {
  std::string out = "feature,mean,sd,median,constant\n";
  for (std::size_t j = 0; j < stats.features.size(); ++j) {
    append_csv_field(out, stats.features[j]);
    out += ',';
    append_double(out, stats.mean[j]);
    out += ',';
    append_double(out, stats.sd[j]);
    out += ',';
    append_double(out, stats.median[j]);
    out += stats.constant[j] ? ",1\n" : ",0\n";
  }
  return out;
}

NormalizationStats load_normalizer(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row)) fail(ErrorKind::kSchema, path + ": empty normalizer file");
  const auto col = require_columns(row, {"feature", "mean", "sd", "median", "constant"}, path);
  NormalizationStats stats;
  while (reader.next(row)) {
    auto where = [&] { return path + ":" + std::to_string(reader.line()); };
    if (row.size() != 5) fail(ErrorKind::kSchema, where() + ": expected 5 fields");
    const auto mean = parse_double(row[col[1]]);
    const auto sd = parse_double(row[col[2]]);
    const auto median = parse_double(row[col[3]]);
    const auto constant = row[col[4]];
    if (!mean || !sd || !median || *sd < 0.0 || (constant != "0" && constant != "1"))
      fail(ErrorKind::kInput, where() + ": bad normalizer row");
    stats.features.push_back(row[col[0]]);
    stats.mean.push_back(*mean);
    stats.sd.push_back(*sd);
    stats.median.push_back(*median);
    stats.constant.push_back(constant == "1" ? 1 : 0);
  }
  return stats;
}

namespace {

// Centered copy plus its sum of squares.
struct Centered {
  std::vector<double> values;
  double ss = 0.0;
};

Centered center(std::span<const double> x) {
  Centered c;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  c.values.reserve(x.size());
  for (double v : x) {
    c.values.push_back(v - mean);
    c.ss += (v - mean) * (v - mean);
  }
  return c;
}

bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
}

double correlate(const Centered& a, const Centered& b) {
  double sxy = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) sxy += a.values[i] * b.values[i];
  return std::clamp(sxy / std::sqrt(a.ss * b.ss), -1.0, 1.0);
}

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::kSchema, "pearson_r inputs differ in length");
  if (x.size() < 2) fail(ErrorKind::kInsufficientData, "pearson_r needs at least 2 pairs");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      fail(ErrorKind::kInput, "pearson_r inputs must be finite");
  if (is_constant(x) || is_constant(y))
    fail(ErrorKind::kUndefined, "correlation with a constant vector is undefined");
  return correlate(center(x), center(y));
}

CorrelationReport correlation_report(const FeatureMatrix& m, double threshold) {
  if (m.rows() < 2) fail(ErrorKind::kInsufficientData, "correlation needs at least 2 rows");
  CorrelationReport report;
  std::vector<std::size_t> usable;
  std::vector<Centered> centered;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto column = m.column(j);
    if (!std::all_of(column.begin(), column.end(), [](double v) { return std::isfinite(v); }))
      fail(ErrorKind::kInput, "column '" + m.names()[j] + "' has missing values");
    if (is_constant(column)) {
      report.constant.push_back(m.names()[j]);
      continue;
    }
    usable.push_back(j);
    centered.push_back(center(column));
  }
  for (std::size_t a = 0; a < usable.size(); ++a)
    for (std::size_t b = a + 1; b < usable.size(); ++b) {
      const double r = correlate(centered[a], centered[b]);
      if (std::abs(r) >= threshold)
        report.pairs.push_back({m.names()[usable[a]], m.names()[usable[b]], r});
    }
  std::stable_sort(report.pairs.begin(), report.pairs.end(),
                   [](const CorrelationPair& x, const CorrelationPair& y) {
                     return std::abs(x.r) > std::abs(y.r);
                   });
  return report;
}

std::string correlations_to_csv(const CorrelationReport& report) {
  std::string out = "feature_a,feature_b,r\n";
  for (const auto& p : report.pairs) {
    append_csv_field(out, p.feature_a);
    out += ',';
    append_csv_field(out, p.feature_b);
    out += ',';
    append_double(out, p.r);
    out += '\n';
  }
  return out;
}

double FeatureRanking::total() const {
  double sum = 0.0;
  for (const auto& f : features) sum += f.mean_decrease_gini;
  return sum;
}

FeatureRanking ranking_from_scores(std::span<const std::string> names,
                                   std::span<const double> scores) {
  if (names.size() != scores.size())
    fail(ErrorKind::kSchema, "ranking names and scores differ in length");
  FeatureRanking ranking;
  for (std::size_t i = 0; i < names.size(); ++i) ranking.features.push_back({names[i], scores[i]});
  std::sort(ranking.features.begin(), ranking.features.end(),
            [](const RankedFeature& a, const RankedFeature& b) {
              if (a.mean_decrease_gini != b.mean_decrease_gini)
                return a.mean_decrease_gini > b.mean_decrease_gini;
              return a.name < b.name;
            });
  for (std::size_t i = 1; i < ranking.features.size(); ++i)
    if (ranking.features[i].name == ranking.features[i - 1].name)
      fail(ErrorKind::kSchema, "duplicate feature '" + ranking.features[i].name + "' in ranking");
  return ranking;
}

FeatureRanking rank_by_gini(const FeatureMatrix& train, const LabelSet& labels,
                            const ForestParams& params, unsigned threads) {
  const auto model = hotspot::train(train, labels, params, threads);
  const auto scores = importance_gini(model);
  return ranking_from_scores(model.feature_names, scores);
}

std::vector<std::string> select_top_k(const FeatureRanking& ranking, std::size_t k) {
  if (k == 0 || k > ranking.features.size())
    fail(ErrorKind::kConfig, "top-k must lie in [1, " + std::to_string(ranking.features.size()) +
                                 "], got " + std::to_string(k));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranking.features[i].name);
  return out;
}

std::string ranking_to_csv(const FeatureRanking& ranking) {
  const double total = ranking.total();
  std::string out = "rank,feature,mean_decrease_gini,percent\n";
  for (std::size_t i = 0; i < ranking.features.size(); ++i) {
    const auto& f = ranking.features[i];
    out += std::to_string(i + 1) + ',';
    append_csv_field(out, f.name);
    out += ',';
    append_double(out, f.mean_decrease_gini);
    out += ',';
    append_double(out, total > 0.0 ? 100.0 * f.mean_decrease_gini / total : 0.0);
    out += '\n';
  }
  return out;
}

FeatureRanking load_ranking(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row)) fail(ErrorKind::kSchema, path + ": empty ranking file");
  const auto col = require_columns(row, {"feature", "mean_decrease_gini"}, path);
  std::vector<std::string> names;
  std::vector<double> scores;
  while (reader.next(row)) {
    const auto score = parse_double(row.at(col[1]));
    if (!score || *score < 0.0)
      fail(ErrorKind::kInput, path + ":" + std::to_string(reader.line()) + ": bad score");
    names.push_back(row[col[0]]);
    scores.push_back(*score);
  }
  return ranking_from_scores(names, scores);
}

}  // namespace hotspot
