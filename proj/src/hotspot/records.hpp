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
#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "hotspot/text.hpp"

namespace hotspot {

enum class CellId : std::uint64_t {};

constexpr std::uint64_t to_u64(CellId id) { return static_cast<std::uint64_t>(id); }

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Cell {
  CellId id{};
  GeoPoint centroid;
  double surface_area = 0.0;  // square meters

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct YearMonth {
  int year = 0;
  unsigned month = 0;

  bool valid() const { return month >= 1 && month <= 12 && year >= 1 && year <= 9999; }
  friend auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

// Parses "YYYY-MM".
bool parse_year_month(std::string_view text, YearMonth& out);
std::string format_year_month(YearMonth ym);

constexpr std::size_t kAgeBrackets = 6;

// One cell x one hour. Counts are extrapolated estimates, hence reals.
struct HourlyObservation {
  CellId cell{};
  Hour hour_start{};
  double footfall = 0.0;
  double residents = 0.0;
  double workers = 0.0;
  double visitors = 0.0;
  double males = 0.0;
  double females = 0.0;
  std::array<double, kAgeBrackets> age{};  // 0-20, 21-30, 31-40, 41-50, 51-60, over 60

  friend bool operator==(const HourlyObservation&, const HourlyObservation&) = default;
};

struct CrimeEvent {
  std::string crime_id;
  YearMonth month;
  GeoPoint location;
  std::string lsoa_code;
  std::string crime_type;
  std::size_t source_line = 0;  // 0 when not read from a file

  friend bool operator==(const CrimeEvent& a, const CrimeEvent& b) {
    return a.crime_id == b.crime_id && a.month == b.month && a.location == b.location &&
           a.lsoa_code == b.lsoa_code && a.crime_type == b.crime_type;
  }
};

constexpr std::size_t kBoroughMetrics = 68;

struct BoroughProfile {
  std::string profile_id;
  GeoPoint representative_point;
  std::array<double, kBoroughMetrics> metrics{};

  friend bool operator==(const BoroughProfile&, const BoroughProfile&) = default;
};

// Inclusive calendar date range, UTC.
struct DateRange {
  std::chrono::sys_days first;
  std::chrono::sys_days last;

  bool contains(Hour hour) const {
    const auto day = std::chrono::floor<std::chrono::days>(hour);
    return day >= first && day <= last;
  }
};

using ObservationPeriod = std::vector<DateRange>;

// Dec 9-15 2012 and Dec 23 2012 - Jan 5 2013: 21 days of hourly data.
ObservationPeriod default_observation_period();

}  // namespace hotspot
