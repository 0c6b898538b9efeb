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

#include "hotspot/feature_factory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "hotspot/error.hpp"
#include "hotspot/parallel.hpp"

namespace hotspot {

namespace {

constexpr std::array<Variable, kVariableCount> kVariables = {
    Variable::kFootfall,     Variable::kResidents,    Variable::kWorkers,
    Variable::kVisitors,     Variable::kMales,        Variable::kFemales,
    Variable::kAge020Count,  Variable::kAge2130Count, Variable::kAge3140Count,
    Variable::kAge4150Count, Variable::kAge5160Count, Variable::kAgeOver60Count,
    Variable::kAtHome,       Variable::kAtWork,       Variable::kVisiting,
    Variable::kMaleFrac,     Variable::kAge020,       Variable::kAge2130,
    Variable::kAge3140,      Variable::kAge4150,      Variable::kAge5160,
    Variable::kAgeOver60};

constexpr std::array<std::string_view, kVariableCount> kVariableTokens = {
    "footfall",    "residents",    "workers",      "visitors",     "males",
    "females",     "age020count",  "age2130count", "age3140count", "age4150count",
    "age5160count", "ageover60count", "athome",    "atwork",       "visiting",
    "male_frac",   "age020",       "age2130",      "age3140",      "age4150",
    "age5160",     "ageover60"};

constexpr std::array<Stat, 4> kPointStats = {Stat::kMean, Stat::kMedian, Stat::kMin, Stat::kMax};
constexpr std::array<Granularity, 3> kWindowed = {Granularity::kHourly, Granularity::kFourHourly,
                                                  Granularity::kDaily};

bool window_enabled(const WindowSet& w, Granularity g) {
  switch (g) {
    case Granularity::kHourly: return w.hourly;
    case Granularity::kFourHourly: return w.four_hourly;
    case Granularity::kDaily: return w.daily;
    case Granularity::kMonthly: return true;
  }
  return false;
}

std::optional<Stat> parse_stat(std::string_view token) {
  if (token == "entropy" || token == "entropy.empirical") return Stat::kEntropy;
  for (Stat s : kAllStats)
    if (stat_token(s) == token) return s;
  return std::nullopt;
}

// Entropy of weights already known to be finite and non-negative; NaN when
// none is positive.
double entropy_of_nonnegative(std::span<const double> w) {
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0)) return kMissing;
  double h = 0.0;
  for (double x : w) {
    if (x <= 0.0) continue;
    const double p = x / total;
    h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

// Summary of the present values; entropy shifts by -min when a value is negative.
StatBundle summarize_present(std::vector<double>& present) {
  StatBundle b;
  const std::size_t n = present.size();
  double sum = 0.0;
  for (double v : present) sum += v;
  std::vector<double> sorted = present;
  std::sort(sorted.begin(), sorted.end());
  b.min = sorted.front();
  b.max = sorted.back();
  b.mean = std::clamp(sum / static_cast<double>(n), b.min, b.max);
  b.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  if (n >= 2) {
    double ss = 0.0;
    for (double v : present) ss += (v - b.mean) * (v - b.mean);
    b.sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  if (b.min < 0.0) {
    for (double& v : present) v -= b.min;
  }
  b.entropy = entropy_of_nonnegative(present);
  return b;
}

std::vector<double> present_values(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values)
    if (!std::isnan(v)) out.push_back(v);
  return out;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Bundles per tumbling window; never throws.
std::vector<StatBundle> window_bundles(const DerivedSeries& series, int width) {
  std::vector<StatBundle> out;
  std::vector<double> chunk;
  std::size_t i = 0;
  const std::size_t n = series.hours.size();
  while (i < n) {
    const std::int64_t key = floor_div(series.hours[i].time_since_epoch().count(), width);
    chunk.clear();
    while (i < n && floor_div(series.hours[i].time_since_epoch().count(), width) == key) {
      if (!std::isnan(series.values[i])) chunk.push_back(series.values[i]);
      ++i;
    }
    if (!chunk.empty()) out.push_back(summarize_present(chunk));
  }
  return out;
}

// Outer statistic across bundles; NaN where the strict version would throw.
void second_order_all(std::span<const StatBundle> bundles, Stat inner,
                      std::array<double, 6>& outer_values) {
  std::vector<double> inner_values;
  inner_values.reserve(bundles.size());
  for (const auto& b : bundles) {
    const double v = b.get(inner);
    if (!std::isnan(v)) inner_values.push_back(v);
  }
  outer_values.fill(kMissing);
  if (inner_values.empty()) return;
  const StatBundle s = summarize_present(inner_values);
  for (std::size_t k = 0; k < kAllStats.size(); ++k) outer_values[k] = s.get(kAllStats[k]);
  if (bundles.size() < 2 || inner_values.size() < 2) {
    outer_values[static_cast<std::size_t>(Stat::kSd)] = kMissing;
    outer_values[static_cast<std::size_t>(Stat::kEntropy)] = kMissing;
  }
}

}  // namespace

std::string_view stat_token(Stat stat) {
  switch (stat) {
    case Stat::kMean: return "mean";
    case Stat::kMedian: return "median";
    case Stat::kSd: return "sd";
    case Stat::kMin: return "min";
    case Stat::kMax: return "max";
    case Stat::kEntropy: return "entropy.empirical";
  }
  return "";
}

std::string_view granularity_token(Granularity g) {
  switch (g) {
    case Granularity::kHourly: return "hourly";
    case Granularity::kFourHourly: return "4hourly";
    case Granularity::kDaily: return "daily";
    case Granularity::kMonthly: return "monthly";
  }
  return "";
}

std::string_view source_token(Source s) {
  return s == Source::kSmartSteps ? "smartSteps" : "borough";
}

std::string_view variable_token(Variable v) { return kVariableTokens[static_cast<std::size_t>(v)]; }

std::span<const Variable> all_variables() { return kVariables; }

int window_hours(Granularity g) {
  switch (g) {
    case Granularity::kHourly: return 1;
    case Granularity::kFourHourly: return 4;
    case Granularity::kDaily: return 24;
    case Granularity::kMonthly: break;
  }
  fail(ErrorKind::kConfig, "monthly is not a tumbling window");
}

double StatBundle::get(Stat stat) const {
  switch (stat) {
    case Stat::kMean: return mean;
    case Stat::kMedian: return median;
    case Stat::kSd: return sd;
    case Stat::kMin: return min;
    case Stat::kMax: return max;
    case Stat::kEntropy: return entropy;
  }
  return kMissing;
}

double shannon_entropy_empirical(std::span<const double> weights) {
  for (double w : weights)
    if (!std::isfinite(w) || w < 0.0)
      fail(ErrorKind::kUndefined, "entropy weights must be finite and non-negative");
  const double h = entropy_of_nonnegative(weights);
  if (std::isnan(h)) fail(ErrorKind::kUndefined, "entropy needs a positive weight");
  return h;
}

StatBundle summarize(std::span<const double> values) {
  auto present = present_values(values);
  if (present.empty()) fail(ErrorKind::kEmptyWindow, "all values are missing");
  if (present.size() < 2)
    fail(ErrorKind::kInsufficientData, "standard deviation needs at least two values");
  const StatBundle b = summarize_present(present);
  if (std::isnan(b.entropy)) fail(ErrorKind::kUndefined, "entropy of an all-zero window");
  return b;
}

std::optional<StatBundle> summarize_window(std::span<const double> values) {
  auto present = present_values(values);
  if (present.empty()) return std::nullopt;
  return summarize_present(present);
}

std::vector<StatBundle> windowed_stats(const DerivedSeries& series, Granularity window) {
  const int width = window_hours(window);
  if (series.hours.size() != series.values.size())
    fail(ErrorKind::kInput, "series hours and values differ in length");
  if (series.hours.size() < static_cast<std::size_t>(width))
    fail(ErrorKind::kEmptyWindow, "series is shorter than one window");
  auto bundles = window_bundles(series, width);
  if (bundles.empty()) fail(ErrorKind::kEmptyWindow, "no window has a usable value");
  return bundles;
}

double second_order(std::span<const StatBundle> bundles, Stat inner, Stat outer) {
  std::vector<double> inner_values;
  for (const auto& b : bundles) {
    const double v = b.get(inner);
    if (!std::isnan(v)) inner_values.push_back(v);
  }
  const bool needs_two = outer == Stat::kSd || outer == Stat::kEntropy;
  if (inner_values.size() < (needs_two ? 2u : 1u))
    fail(ErrorKind::kEmptyWindow, "not enough days for a second-order statistic");
  const StatBundle s = summarize_present(inner_values);
  const double v = s.get(outer);
  if (std::isnan(v)) fail(ErrorKind::kUndefined, "second-order statistic is undefined");
  return v;
}

std::string feature_name(Source source, Granularity granularity, std::string_view variable,
                         Stat inner, std::optional<Stat> outer) {
  const std::string_view src = source_token(source);
  if (source == Source::kBorough)
    fail(ErrorKind::kNaming, "borough features are named borough.mNN");
  if (std::find(kVariableTokens.begin(), kVariableTokens.end(), variable) == kVariableTokens.end())
    fail(ErrorKind::kNaming, "unknown variable '" + std::string(variable) + "'");
  if (granularity == Granularity::kMonthly && outer)
    fail(ErrorKind::kNaming, "monthly features take no outer statistic");
  if (granularity != Granularity::kMonthly && !outer)
    fail(ErrorKind::kNaming, "windowed features need an outer statistic");
  std::string name;
  name.append(src).append(".").append(granularity_token(granularity)).append(".");
  name.append(variable).append(".").append(stat_token(inner));
  if (outer) name.append(".").append(stat_token(*outer));
  return name;
}

std::string feature_name(std::string_view source, std::string_view granularity,
                         std::string_view variable, std::string_view inner,
                         std::string_view outer) {
  Source src;
  if (source == "smartSteps")
    src = Source::kSmartSteps;
  else if (source == "borough")
    src = Source::kBorough;
  else
    fail(ErrorKind::kNaming, "unknown source '" + std::string(source) + "'");
  std::optional<Granularity> g;
  for (auto candidate : {Granularity::kHourly, Granularity::kFourHourly, Granularity::kDaily,
                         Granularity::kMonthly})
    if (granularity_token(candidate) == granularity) g = candidate;
  if (!g) fail(ErrorKind::kNaming, "unknown granularity '" + std::string(granularity) + "'");
  const auto in = parse_stat(inner);
  if (!in) fail(ErrorKind::kNaming, "unknown statistic '" + std::string(inner) + "'");
  std::optional<Stat> out;
  if (!outer.empty() && outer != "none") {
    out = parse_stat(outer);
    if (!out) fail(ErrorKind::kNaming, "unknown statistic '" + std::string(outer) + "'");
  }
  return feature_name(src, *g, variable, *in, out);
}

std::string borough_feature_name(std::size_t metric) {
  if (metric >= kBoroughMetrics) fail(ErrorKind::kNaming, "borough metric index out of range");
  char buf[16];
  std::snprintf(buf, sizeof(buf), "borough.m%02zu", metric + 1);
  return buf;
}

std::span<const Stat> inner_stats(Granularity g) {
  if (g == Granularity::kHourly) return kPointStats;
  return kAllStats;
}

std::vector<std::string> feature_vocabulary(const WindowSet& windows) {
  std::vector<std::string> names;
  names.reserve(kFeatureCount);
  for (Variable v : kVariables) {
    const auto token = variable_token(v);
    for (Granularity g : kWindowed) {
      if (!window_enabled(windows, g)) continue;
      for (Stat inner : inner_stats(g))
        for (Stat outer : kAllStats)
          names.push_back(feature_name(Source::kSmartSteps, g, token, inner, outer));
    }
    for (Stat s : kAllStats)
      names.push_back(feature_name(Source::kSmartSteps, Granularity::kMonthly, token, s, {}));
  }
  for (std::size_t k = 0; k < kBoroughMetrics; ++k) names.push_back(borough_feature_name(k));
  return names;
}

bool is_smartsteps_feature(std::string_view name) { return name.starts_with("smartSteps."); }
bool is_borough_feature(std::string_view name) { return name.starts_with("borough."); }

std::vector<DerivedSeries> derive_series(CellId cell,
                                         std::span<const HourlyObservation> observations) {
  std::vector<DerivedSeries> series(kVariableCount);
  for (std::size_t v = 0; v < kVariableCount; ++v) {
    series[v].cell = cell;
    series[v].variable = kVariables[v];
    series[v].hours.reserve(observations.size());
    series[v].values.reserve(observations.size());
  }
  auto share = [](double part, double total, double footfall) {
    if (!(footfall > 0.0) || !(total > 0.0)) return kMissing;
    return std::clamp(part / total, 0.0, 1.0);
  };
  for (const auto& o : observations) {
    const double origin = o.residents + o.workers + o.visitors;
    const double gender = o.males + o.females;
    double ages = 0.0;
    for (double a : o.age) ages += a;
    const std::array<double, kVariableCount> values = {
        o.footfall,
        o.residents,
        o.workers,
        o.visitors,
        o.males,
        o.females,
        o.age[0],
        o.age[1],
        o.age[2],
        o.age[3],
        o.age[4],
        o.age[5],
        share(o.residents, origin, o.footfall),
        share(o.workers, origin, o.footfall),
        share(o.visitors, origin, o.footfall),
        share(o.males, gender, o.footfall),
        share(o.age[0], ages, o.footfall),
        share(o.age[1], ages, o.footfall),
        share(o.age[2], ages, o.footfall),
        share(o.age[3], ages, o.footfall),
        share(o.age[4], ages, o.footfall),
        share(o.age[5], ages, o.footfall),
    };
    for (std::size_t v = 0; v < kVariableCount; ++v) {
      series[v].hours.push_back(o.hour_start);
      series[v].values.push_back(values[v]);
    }
  }
  return series;
}

FeatureMatrix featurize(std::span<const HourlyObservation> observations,
                        const CellUniverse& universe, std::span<const BoroughProfile> profiles,
                        const FeaturizeOptions& options) {
  if (observations.empty()) fail(ErrorKind::kInput, "no hourly observations");
  std::vector<std::size_t> order(observations.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = observations[a];
    const auto& y = observations[b];
    if (x.cell != y.cell) return x.cell < y.cell;
    return x.hour_start < y.hour_start;
  });
  std::vector<HourlyObservation> sorted;
  sorted.reserve(order.size());
  for (auto i : order) sorted.push_back(observations[i]);

  // [begin, end) ranges of each universe cell in `sorted`.
  std::vector<std::pair<std::size_t, std::size_t>> ranges(universe.size(), {0, 0});
  std::size_t matched = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].cell == sorted[i].cell) {
      if (j > i && sorted[j].hour_start == sorted[j - 1].hour_start)
        fail(ErrorKind::kInput, "duplicate observation for cell " +
                                    std::to_string(to_u64(sorted[j].cell)) + " at " +
                                    format_rfc3339(sorted[j].hour_start));
      ++j;
    }
    const std::size_t ci = universe.index_of(sorted[i].cell);
    if (ci == universe.size())
      fail(ErrorKind::kInput,
           "observation for unknown cell " + std::to_string(to_u64(sorted[i].cell)));
    ranges[ci] = {i, j};
    ++matched;
    i = j;
  }
  if (matched == 0) fail(ErrorKind::kInput, "no observations for any cell");

  const auto profile_of = georeference_profiles(profiles, universe);
  std::vector<CellId> ids;
  ids.reserve(universe.size());
  for (const Cell& c : universe.cells()) ids.push_back(c.id);
  const auto names = feature_vocabulary(options.windows);
  FeatureMatrix matrix(names, ids);
  const std::size_t smartsteps_cols = names.size() - kBoroughMetrics;

  parallel_for(universe.size(), options.threads, [&](std::size_t ci) {
    auto row = matrix.row(ci);
    const auto& profile = profiles[profile_of.at(universe.cells()[ci].id)];
    for (std::size_t k = 0; k < kBoroughMetrics; ++k) row[smartsteps_cols + k] = profile.metrics[k];

    const auto [begin, end] = ranges[ci];
    if (begin == end) return;
    const auto series = derive_series(
        universe.cells()[ci].id,
        std::span<const HourlyObservation>(sorted.data() + begin, end - begin));
    std::size_t col = 0;
    std::array<double, 6> outer{};
    for (const auto& s : series) {
      for (Granularity g : kWindowed) {
        if (!window_enabled(options.windows, g)) continue;
        const auto bundles = window_bundles(s, window_hours(g));
        if (g == Granularity::kHourly) {
          // Every point statistic of a one-value window is that value.
          second_order_all(bundles, Stat::kMean, outer);
          for (std::size_t inner = 0; inner < kPointStats.size(); ++inner)
            for (double v : outer) row[col++] = v;
        } else {
          for (Stat inner : kAllStats) {
            second_order_all(bundles, inner, outer);
            for (double v : outer) row[col++] = v;
          }
        }
      }
      const auto whole = summarize_window(s.values);
      for (Stat st : kAllStats) row[col++] = whole ? whole->get(st) : kMissing;
    }
  });
  return matrix;
}

}  // namespace hotspot
