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

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hotspot/feature_matrix.hpp"
#include "hotspot/geo_index.hpp"
#include "hotspot/records.hpp"

namespace hotspot {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

enum class Stat { kMean, kMedian, kSd, kMin, kMax, kEntropy };
inline constexpr std::array<Stat, 6> kAllStats = {Stat::kMean, Stat::kMedian, Stat::kSd,
                                                 Stat::kMin,  Stat::kMax,    Stat::kEntropy};

enum class Granularity { kHourly, kFourHourly, kDaily, kMonthly };
enum class Source { kSmartSteps, kBorough };

// Raw counts first, then fractions. Fractions are shares of their group total
// (origin, gender, age) and are missing when footfall or the group total is 0.
enum class Variable {
  kFootfall, kResidents, kWorkers, kVisitors, kMales, kFemales,
  kAge020Count, kAge2130Count, kAge3140Count, kAge4150Count, kAge5160Count, kAgeOver60Count,
  kAtHome, kAtWork, kVisiting, kMaleFrac,
  kAge020, kAge2130, kAge3140, kAge4150, kAge5160, kAgeOver60,
};
inline constexpr std::size_t kVariableCount = 22;

std::string_view stat_token(Stat stat);             // "entropy.empirical" for kEntropy
std::string_view granularity_token(Granularity g);  // hourly, 4hourly, daily, monthly
std::string_view source_token(Source s);            // smartSteps, borough
std::string_view variable_token(Variable v);
std::span<const Variable> all_variables();

// Window length in hours for the tumbling-window granularities.
int window_hours(Granularity g);

struct StatBundle {
  double mean = kMissing;
  double median = kMissing;
  double sd = kMissing;       // missing with fewer than two values
  double min = kMissing;
  double max = kMissing;
  double entropy = kMissing;  // bits; missing when every weight is zero

  double get(Stat stat) const;
};

// -sum p log2 p over p = w / sum(w). Throws kUndefined when a weight is
// negative or non-finite, or when none is positive.
double shannon_entropy_empirical(std::span<const double> weights);

// Strict summary over non-missing values: kEmptyWindow when all are missing,
// kInsufficientData with fewer than two, kUndefined when entropy is.
StatBundle summarize(std::span<const double> values);

// Lenient variant used inside windows: undefined entries come back missing.
// nullopt when every value is missing.
std::optional<StatBundle> summarize_window(std::span<const double> values);

struct DerivedSeries {
  CellId cell{};
  Variable variable{};
  std::vector<Hour> hours;     // strictly increasing
  std::vector<double> values;  // aligned to hours; NaN = missing
};

// Tumbling windows aligned to midnight UTC; windows without usable values are
// skipped. kEmptyWindow when the series spans less than one window or no
// window has a value.
std::vector<StatBundle> windowed_stats(const DerivedSeries& series, Granularity window);

// Applies `outer` across days to the `inner` statistic of each day. Outer sd
// and entropy need two usable days, the rest one (kEmptyWindow otherwise).
double second_order(std::span<const StatBundle> bundles, Stat inner, Stat outer);

// Dotted name: source.granularity.variable.inner[.outer]; monthly names have
// no outer part, every other granularity requires one. Throws kNaming.
std::string feature_name(Source source, Granularity granularity, std::string_view variable,
                         Stat inner, std::optional<Stat> outer);
// Token form: "entropy" and "entropy.empirical" both name the entropy stat;
// an empty outer means none.
std::string feature_name(std::string_view source, std::string_view granularity,
                         std::string_view variable, std::string_view inner,
                         std::string_view outer);

std::string borough_feature_name(std::size_t metric);  // borough.m01 .. borough.m68

struct WindowSet {
  bool hourly = true;
  bool four_hourly = true;
  bool daily = true;
};

// Inner stats materialized per granularity. Single-hour windows carry one
// value, so their sd and entropy are excluded.
std::span<const Stat> inner_stats(Granularity g);

// Vocabulary size per variable with every window: 4*6 + 6*6 + 6*6 + 6.
inline constexpr std::size_t kFeaturesPerVariable = 4 * 6 + 6 * 6 + 6 * 6 + 6;
inline constexpr std::size_t kSmartStepsFeatureCount = kVariableCount * kFeaturesPerVariable;
inline constexpr std::size_t kFeatureCount = kSmartStepsFeatureCount + kBoroughMetrics;
static_assert(kFeatureCount == 2312);

// Column order produced by featurize.
std::vector<std::string> feature_vocabulary(const WindowSet& windows = {});

bool is_smartsteps_feature(std::string_view name);
bool is_borough_feature(std::string_view name);

// The 22 hourly series of one cell. `observations` must belong to that cell
// and be sorted by hour without duplicates.
std::vector<DerivedSeries> derive_series(CellId cell,
                                         std::span<const HourlyObservation> observations);

struct FeaturizeOptions {
  WindowSet windows;
  unsigned threads = 1;
};

// One row per universe cell. Cells without observations keep missing
// smartSteps features; borough metrics come from the nearest profile.
// Throws kInput when no observation matches a universe cell, or on duplicate
// cell/hour rows and unknown cells.
FeatureMatrix featurize(std::span<const HourlyObservation> observations,
                        const CellUniverse& universe, std::span<const BoroughProfile> profiles,
                        const FeaturizeOptions& options = {});

}  // namespace hotspot
