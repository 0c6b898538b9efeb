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
#include <optional>
#include <string>
#include <vector>

#include "hotspot/geo_index.hpp"
#include "hotspot/records.hpp"

namespace hotspot {

struct Rejection {
  std::size_t line;  // 1-based physical line in the source file
  std::string reason;
};

template <typename T>
struct LoadResult {
  std::vector<T> rows;
  std::vector<Rejection> rejections;
};

// The 11 police.uk street-level categories in use for the covered months.
std::vector<std::string> default_crime_types();

struct HourlyLoadOptions {
  // When set, rows whose hour falls outside every range are rejected.
  std::optional<ObservationPeriod> period;
};

// Hourly CSV: cell_id,hour_start,footfall,residents,workers,visitors,males,
// females,a0_20,a21_30,a31_40,a41_50,a51_60,a_over60
LoadResult<HourlyObservation> load_hourly(const std::string& path,
                                          const HourlyLoadOptions& options = {});

struct CrimeLoadOptions {
  // Empty means any category is accepted.
  std::vector<std::string> crime_types = default_crime_types();
};

// Crime CSV: crime_id,year,month,lat,lon,lsoa_code,crime_type
LoadResult<CrimeEvent> load_crimes(const std::string& path, const CrimeLoadOptions& options = {});

struct ImputationNote {
  std::string profile_id;
  std::size_t metric;  // 0-based
  double value;
};

struct ProfileLoadResult {
  std::vector<BoroughProfile> rows;
  std::vector<Rejection> rejections;
  std::vector<ImputationNote> imputed;
};

// Profile CSV: profile_id,lat,lon followed by exactly 68 metric columns.
// Blank metric cells are replaced by the column median over the file.
ProfileLoadResult load_profiles(const std::string& path);

std::string hourly_to_csv(const std::vector<HourlyObservation>& rows);
std::string crimes_to_csv(const std::vector<CrimeEvent>& rows);
std::string profiles_to_csv(const std::vector<BoroughProfile>& rows);

struct BoundingBox {
  double lat_min = 51.28;
  double lat_max = 51.70;
  double lon_min = -0.51;
  double lon_max = 0.33;
};

// Plantable features: the generator has a latent mechanism for each.
std::vector<std::string> plantable_features();
std::vector<std::string> default_planted_features();

struct SyntheticConfig {
  std::uint64_t seed = 42;
  std::size_t n_cells = 1000;
  std::size_t n_hours = 504;
  std::size_t n_profiles = 33;
  BoundingBox bbox;
  double signal_strength = 1.0;
  std::vector<std::string> planted_features = default_planted_features();
  ObservationPeriod period = default_observation_period();
  YearMonth target_month{2013, 1};
  YearMonth previous_month{2012, 12};

  // Throws kConfig.
  void validate() const;
};

struct SyntheticDataset {
  CellUniverse universe;
  std::vector<HourlyObservation> hourly;
  std::vector<CrimeEvent> crimes;
  std::vector<BoroughProfile> profiles;
};

// Pure function of the config; per-cell streams are seeded from
// (seed, cell_id), so the thread count never changes the output.
SyntheticDataset generate_synthetic(const SyntheticConfig& config, unsigned threads = 1);

}  // namespace hotspot
