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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hotspot/geo_index.hpp"
#include "hotspot/records.hpp"

namespace hotspot {

struct CrimeCounts {
  YearMonth month;
  std::map<CellId, std::int64_t> counts;
};

enum class KurtosisConvention { kRaw, kExcess };

struct DistributionSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::optional<double> skewness;  // undefined when the sample is constant
  std::optional<double> kurtosis;
};

enum class CrimeClass : std::uint8_t { kLow = 0, kHigh = 1 };

struct LabelSet {
  std::map<CellId, CrimeClass> labels;
  std::map<CellId, std::int64_t> counts;
  double split_threshold = 0.0;
  bool degenerate = false;  // high class empty

  double high_fraction() const;
};

struct CountOptions {
  // Adds every universe cell without a crime as a zero count.
  bool include_zero_cells = false;
};

// Georeferences events to their nearest cell and counts those in `month`.
// Warns (does not throw) when the month has no events.
CrimeCounts count_crimes(std::span<const CrimeEvent> events, const CellUniverse& universe,
                         YearMonth month, const CountOptions& options = {});

// Type-7 quantiles; skewness m3/m2^1.5 and kurtosis m4/m2^2 (minus 3 for
// kExcess) over central sample moments. Throws kInsufficientData below 2 cells.
DistributionSummary summarize_counts(const CrimeCounts& counts,
                                     KurtosisConvention convention = KurtosisConvention::kRaw);

// Type-7 quantile of a sorted sample.
double quantile_type7(std::span<const double> sorted, double p);

// Low iff count <= median. Warns when the high class comes out empty.
LabelSet median_split(const CrimeCounts& counts);

// Labels CSV: cell_id,crime_count,label
std::string labels_to_csv(const LabelSet& labels);
LabelSet load_labels(const std::string& path);

// One-row table in Min, Q1, Median, Mean, Q3, Max order plus moments.
std::string summary_to_csv(const DistributionSummary& s);
std::string summary_to_text(const DistributionSummary& s);

}  // namespace hotspot
