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

#include "hotspot/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include "hotspot/error.hpp"
#include "hotspot/text.hpp"

namespace hotspot {

bool parse_year_month(std::string_view text, YearMonth& out) {
  text = trim(text);
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) return false;
  const auto y = parse_int(text.substr(0, dash));
  const auto m = parse_int(text.substr(dash + 1));
  if (!y || !m || *m < 1 || *m > 12) return false;
  YearMonth ym{static_cast<int>(*y), static_cast<unsigned>(*m)};
  if (!ym.valid()) return false;
  out = ym;
  return true;
}

std::string format_year_month(YearMonth ym) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u", ym.year, ym.month);
  return buf;
}

ObservationPeriod default_observation_period() {
  using namespace std::chrono;
  return {
      {sys_days{2012y / December / 9}, sys_days{2012y / December / 15}},
      {sys_days{2012y / December / 23}, sys_days{2013y / January / 5}},
  };
}

std::vector<std::string> default_crime_types() {
  return {"anti-social-behaviour", "burglary",      "criminal-damage-arson",
          "drugs",                 "other-crime",   "other-theft",
          "public-disorder-weapons", "robbery",     "shoplifting",
          "vehicle-crime",         "violent-crime"};
}

namespace {

constexpr std::string_view kHourlyColumns[] = {
    "cell_id", "hour_start", "footfall", "residents", "workers", "visitors", "males",
    "females", "a0_20",      "a21_30",   "a31_40",    "a41_50",  "a51_60",   "a_over60"};

constexpr std::string_view kCrimeColumns[] = {"crime_id", "year",      "month",     "lat",
                                              "lon",      "lsoa_code", "crime_type"};

}  // namespace

LoadResult<HourlyObservation> load_hourly(const std::string& path,
                                          const HourlyLoadOptions& options) {
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row)) fail(ErrorKind::kSchema, path + ": missing header");
  const auto col = require_columns(
      row, std::vector<std::string_view>(std::begin(kHourlyColumns), std::end(kHourlyColumns)),
      path);

  LoadResult<HourlyObservation> out;
  std::set<std::pair<CellId, Hour>> seen;
  while (reader.next(row)) {
    const std::size_t line = reader.line();
    auto reject = [&](std::string reason) { out.rejections.push_back({line, std::move(reason)}); };
    if (row.size() < std::size(kHourlyColumns)) {
      reject("expected " + std::to_string(std::size(kHourlyColumns)) + " fields");
      continue;
    }
    HourlyObservation obs;
    const auto id = parse_uint(row[col[0]]);
    if (!id) {
      reject("malformed cell_id");
      continue;
    }
    obs.cell = CellId{*id};
    const auto hour = parse_rfc3339_hour(row[col[1]]);
    if (!hour) {
      reject("hour_start is not an RFC 3339 UTC hour");
      continue;
    }
    obs.hour_start = *hour;
    if (options.period && std::none_of(options.period->begin(), options.period->end(),
                                       [&](const DateRange& r) { return r.contains(*hour); })) {
      reject("hour_start outside the observation period");
      continue;
    }
    double* targets[] = {&obs.footfall, &obs.residents, &obs.workers, &obs.visitors,
                         &obs.males,    &obs.females,   &obs.age[0],  &obs.age[1],
                         &obs.age[2],   &obs.age[3],    &obs.age[4],  &obs.age[5]};
    bool ok = true;
    for (std::size_t k = 0; k < std::size(targets); ++k) {
      const auto value = parse_double(row[col[k + 2]]);
      const std::string name(kHourlyColumns[k + 2]);
      if (!value || !std::isfinite(*value)) {
        reject(name + " is not a finite number");
        ok = false;
        break;
      }
      if (*value < 0.0) {
        reject(name + " is negative");
        ok = false;
        break;
      }
      *targets[k] = *value;
    }
    if (!ok) continue;
    if (!seen.emplace(obs.cell, obs.hour_start).second) {
      reject("duplicate cell/hour");
      continue;
    }
    out.rows.push_back(obs);
  }
  return out;
}

LoadResult<CrimeEvent> load_crimes(const std::string& path, const CrimeLoadOptions& options) {
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row)) fail(ErrorKind::kSchema, path + ": missing header");
  const auto col = require_columns(
      row, std::vector<std::string_view>(std::begin(kCrimeColumns), std::end(kCrimeColumns)), path);
  const std::set<std::string> allowed(options.crime_types.begin(), options.crime_types.end());

  LoadResult<CrimeEvent> out;
  while (reader.next(row)) {
    const std::size_t line = reader.line();
    auto reject = [&](std::string reason) { out.rejections.push_back({line, std::move(reason)}); };
    if (row.size() < std::size(kCrimeColumns)) {
      reject("expected " + std::to_string(std::size(kCrimeColumns)) + " fields");
      continue;
    }
    CrimeEvent e;
    e.source_line = line;
    e.crime_id = std::string(trim(row[col[0]]));
    if (e.crime_id.empty()) {
      reject("empty crime_id");
      continue;
    }
    const auto year = parse_int(row[col[1]]);
    const auto month = parse_int(row[col[2]]);
    if (!year || !month || *month < 1 || *month > 12 || *year < 1 || *year > 9999) {
      reject("invalid calendar month");
      continue;
    }
    e.month = {static_cast<int>(*year), static_cast<unsigned>(*month)};
    const auto lat = parse_double(row[col[3]]);
    const auto lon = parse_double(row[col[4]]);
    if (!lat || !lon) {
      reject("malformed coordinates");
      continue;
    }
    e.location = {*lat, *lon};
    if (!e.location.valid()) {
      reject("coordinates out of range");
      continue;
    }
    e.lsoa_code = std::string(trim(row[col[5]]));
    e.crime_type = std::string(trim(row[col[6]]));
    if (!allowed.empty() && !allowed.count(e.crime_type)) {
      reject("unknown crime_type '" + e.crime_type + "'");
      continue;
    }
    out.rows.push_back(std::move(e));
  }
  return out;
}

ProfileLoadResult load_profiles(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> header;
  if (!reader.next(header)) fail(ErrorKind::kSchema, path + ": missing header");
  require_columns(header, {"profile_id", "lat", "lon"}, path);
  if (trim(header[0]) != "profile_id" || trim(header[1]) != "lat" || trim(header[2]) != "lon")
    fail(ErrorKind::kSchema, path + ": header must start with profile_id,lat,lon");
  if (header.size() - 3 != kBoroughMetrics)
    fail(ErrorKind::kSchema, path + ": expected " + std::to_string(kBoroughMetrics) +
                                 " metric columns, found " + std::to_string(header.size() - 3));

  ProfileLoadResult out;
  std::vector<std::array<bool, kBoroughMetrics>> blank;
  std::vector<std::string> row;
  while (reader.next(row)) {
    const std::size_t line = reader.line();
    auto reject = [&](std::string reason) { out.rejections.push_back({line, std::move(reason)}); };
    if (row.size() != header.size()) {
      reject("expected " + std::to_string(header.size()) + " fields");
      continue;
    }
    BoroughProfile p;
    p.profile_id = std::string(trim(row[0]));
    const auto lat = parse_double(row[1]);
    const auto lon = parse_double(row[2]);
    if (p.profile_id.empty() || !lat || !lon || !GeoPoint{*lat, *lon}.valid()) {
      reject("invalid profile id or location");
      continue;
    }
    p.representative_point = {*lat, *lon};
    std::array<bool, kBoroughMetrics> missing{};
    bool ok = true;
    for (std::size_t k = 0; k < kBoroughMetrics; ++k) {
      const auto text = trim(row[k + 3]);
      if (text.empty() || text == "NA") {
        missing[k] = true;
        continue;
      }
      const auto value = parse_double(text);
      if (!value || !std::isfinite(*value)) {
        reject(std::string(trim(header[k + 3])) + " is not a finite number");
        ok = false;
        break;
      }
      p.metrics[k] = *value;
    }
    if (!ok) continue;
    out.rows.push_back(std::move(p));
    blank.push_back(missing);
  }

  for (std::size_t k = 0; k < kBoroughMetrics; ++k) {
    std::vector<double> present;
    for (std::size_t r = 0; r < out.rows.size(); ++r)
      if (!blank[r][k]) present.push_back(out.rows[r].metrics[k]);
    if (present.size() == out.rows.size()) continue;
    if (present.empty())
      fail(ErrorKind::kInput, path + ": metric column '" + std::string(trim(header[k + 3])) +
                                  "' has no values to impute from");
    std::sort(present.begin(), present.end());
    const std::size_t n = present.size();
    const double median =
        n % 2 == 1 ? present[n / 2] : (present[n / 2 - 1] + present[n / 2]) / 2.0;
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
      if (!blank[r][k]) continue;
      out.rows[r].metrics[k] = median;
      out.imputed.push_back({out.rows[r].profile_id, k, median});
    }
  }
  return out;
}

std::string hourly_to_csv(const std::vector<HourlyObservation>& rows) {
  std::string out;
  for (std::size_t k = 0; k < std::size(kHourlyColumns); ++k) {
    if (k) out += ',';
    out += kHourlyColumns[k];
  }
  out += '\n';
  out.reserve(rows.size() * 110);
  for (const auto& r : rows) {
    out += std::to_string(to_u64(r.cell));
    out += ',';
    out += format_rfc3339(r.hour_start);
    for (double v : {r.footfall, r.residents, r.workers, r.visitors, r.males, r.females, r.age[0],
                     r.age[1], r.age[2], r.age[3], r.age[4], r.age[5]}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string crimes_to_csv(const std::vector<CrimeEvent>& rows) {
  std::string out = "crime_id,year,month,lat,lon,lsoa_code,crime_type\n";
  for (const auto& e : rows) {
    append_csv_field(out, e.crime_id);
    out += ',' + std::to_string(e.month.year) + ',' + std::to_string(e.month.month) + ',';
    append_double(out, e.location.lat);
    out += ',';
    append_double(out, e.location.lon);
    out += ',';
    append_csv_field(out, e.lsoa_code);
    out += ',';
    append_csv_field(out, e.crime_type);
    out += '\n';
  }
  return out;
}

std::string profiles_to_csv(const std::vector<BoroughProfile>& rows) {
  std::string out = "profile_id,lat,lon";
  char name[8];
  for (std::size_t k = 0; k < kBoroughMetrics; ++k) {
    std::snprintf(name, sizeof(name), ",m%02zu", k + 1);
    out += name;
  }
  out += '\n';
  for (const auto& p : rows) {
    append_csv_field(out, p.profile_id);
    out += ',';
    append_double(out, p.representative_point.lat);
    out += ',';
    append_double(out, p.representative_point.lon);
    for (double v : p.metrics) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace hotspot
