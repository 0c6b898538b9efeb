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

#include "hotspot/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hotspot/error.hpp"
#include "hotspot/log.hpp"
#include "hotspot/text.hpp"

namespace hotspot {

double LabelSet::high_fraction() const {
  if (labels.empty()) return 0.0;
  std::size_t high = 0;
  for (const auto& [id, cls] : labels) high += cls == CrimeClass::kHigh;
  return static_cast<double>(high) / static_cast<double>(labels.size());
}

CrimeCounts count_crimes(std::span<const CrimeEvent> events, const CellUniverse& universe,
                         YearMonth month, const CountOptions& options) {
  CrimeCounts out{month, {}};
  if (options.include_zero_cells)
    for (const Cell& c : universe.cells()) out.counts.emplace(c.id, 0);
  std::size_t rejected = 0;
  for (const auto& e : events) {
    if (e.month != month) continue;
    if (!e.location.valid()) {
      ++rejected;
      continue;
    }
    ++out.counts[universe.nearest_cell(e.location)];
  }
  if (rejected > 0)
    log::warn(std::to_string(rejected) + " crime events with invalid coordinates skipped");
  bool any = false;
  for (const auto& [id, n] : out.counts) any = any || n > 0;
  if (!any) log::warn("no crime events in " + format_year_month(month));
  return out;
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorKind::kInsufficientData, "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

DistributionSummary summarize_counts(const CrimeCounts& counts, KurtosisConvention convention) {
  if (counts.counts.size() < 2)
    fail(ErrorKind::kInsufficientData, "count summary needs at least two cells");
  std::vector<double> x;
  x.reserve(counts.counts.size());
  for (const auto& [id, n] : counts.counts) x.push_back(static_cast<double>(n));
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());

  DistributionSummary s;
  s.min = x.front();
  s.max = x.back();
  s.q1 = quantile_type7(x, 0.25);
  s.median = quantile_type7(x, 0.5);
  s.q3 = quantile_type7(x, 0.75);
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2) - (convention == KurtosisConvention::kExcess ? 3.0 : 0.0);
  }
  return s;
}

LabelSet median_split(const CrimeCounts& counts) {
  const auto summary = summarize_counts(counts);
  LabelSet out;
  out.split_threshold = summary.median;
  out.counts = counts.counts;
  for (const auto& [id, n] : counts.counts)
    out.labels.emplace(id, static_cast<double>(n) > out.split_threshold ? CrimeClass::kHigh
                                                                        : CrimeClass::kLow);
  out.degenerate = out.high_fraction() == 0.0;
  if (out.degenerate)
    log::warn("median split produced an empty high-crime class (all counts <= " +
              format_double(out.split_threshold) + ")");
  return out;
}

std::string labels_to_csv(const LabelSet& labels) {
  std::string out = "cell_id,crime_count,label\n";
  for (const auto& [id, cls] : labels.labels) {
    auto it = labels.counts.find(id);
    out += std::to_string(to_u64(id)) + ',' +
           (it == labels.counts.end() ? std::string() : std::to_string(it->second)) + ',' +
           std::to_string(static_cast<int>(cls)) + '\n';
  }
  return out;
}

LabelSet load_labels(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row)) fail(ErrorKind::kSchema, path + ": missing header");
  const auto col = require_columns(row, {"cell_id", "crime_count", "label"}, path);
  LabelSet out;
  while (reader.next(row)) {
    const std::string where = path + ":" + std::to_string(reader.line());
    if (row.size() < 3) fail(ErrorKind::kInput, where + ": short row");
    const auto id = parse_uint(row[col[0]]);
    const auto count = parse_int(row[col[1]]);
    const auto label = parse_int(row[col[2]]);
    if (!id || !label || (*label != 0 && *label != 1))
      fail(ErrorKind::kInput, where + ": malformed label row");
    out.labels[CellId{*id}] = *label ? CrimeClass::kHigh : CrimeClass::kLow;
    if (count) out.counts[CellId{*id}] = *count;
  }
  if (out.counts.size() == out.labels.size() && out.counts.size() >= 2) {
    CrimeCounts c;
    c.counts = out.counts;
    out.split_threshold = summarize_counts(c).median;
  }
  out.degenerate = out.high_fraction() == 0.0;
  return out;
}

std::string summary_to_csv(const DistributionSummary& s) {
  std::string out = "min,q1,median,mean,q3,max,skewness,kurtosis\n";
  for (double v : {s.min, s.q1, s.median, s.mean, s.q3, s.max}) {
    append_double(out, v);
    out += ',';
  }
  out += s.skewness ? format_double(*s.skewness) : "NA";
  out += ',';
  out += s.kurtosis ? format_double(*s.kurtosis) : "NA";
  out += '\n';
  return out;
}

std::string summary_to_text(const DistributionSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%8s %8s %8s %8s %8s %8s\n%8g %8g %8g %8.2f %8g %8g\n", "Min.",
                "Q1", "Median", "Mean", "Q3", "Max.", s.min, s.q1, s.median, s.mean, s.q3, s.max);
  std::string out = buf;
  std::snprintf(buf, sizeof(buf), "skewness = %s, kurtosis = %s\n",
                s.skewness ? format_double(std::round(*s.skewness * 100) / 100).c_str() : "NA",
                s.kurtosis ? format_double(std::round(*s.kurtosis * 100) / 100).c_str() : "NA");
  out += buf;
  return out;
}

}  // namespace hotspot
