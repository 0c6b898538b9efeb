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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "hotspot/error.hpp"
#include "hotspot/ingestion.hpp"
#include "hotspot/parallel.hpp"
#include "hotspot/rng.hpp"

namespace hotspot {

namespace {

constexpr const char* kAthomeVariability = "smartSteps.daily.athome.mean.sd";
constexpr const char* kYouthVariability = "smartSteps.daily.age020.mean.sd";
constexpr const char* kSeniorRhythm = "smartSteps.daily.ageover60.sd.mean";

// Weights of the planted latents in the crime signal, in plantable order.
constexpr double kPlantWeights[] = {1.0, 1.0, 1.0};

// Log-scale slope of each planted mechanism on its latent.
constexpr double kPlantSlope = 0.9;

// Share of the crime signal carried by planted latents vs the borough latent.
constexpr double kBehaviourShare = 0.92;
constexpr double kBoroughShare = 0.39;

// Hourly noise on the planted shares. Averaging a day's 24 hours cancels
// most of it, so the planted day-level statistics beat their min/max cousins.
constexpr double kHomeNoise = 0.05;
constexpr double kYouthNoise = 0.03;
constexpr double kSeniorNoise = 0.008;
constexpr double kSeniorDayNoise = 0.02;
// Log-sd of the day-to-day gain on the senior rhythm.
constexpr double kSeniorGainNoise = 0.3;
// Relative hourly jitter of each middle age bracket, so the brackets that
// absorb the youth and senior shifts are not exact copies of them.
constexpr double kMiddleJitter = 0.2;
// Day-level nuisances on footfall and the work share. They blur count-based
// and work-based views of the at-home shift.
constexpr double kFootfallDayNoise = 0.08;
constexpr double kWorkDayNoise = 0.04;

constexpr double kCrimeBaseRate = 12.0;
constexpr double kCrimeLogSlope = 1.0;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::vector<Hour> calendar_hours(const SyntheticConfig& config) {
  ObservationPeriod ranges = config.period;
  std::sort(ranges.begin(), ranges.end(),
            [](const DateRange& a, const DateRange& b) { return a.first < b.first; });
  std::vector<Hour> hours;
  for (const DateRange& r : ranges) {
    for (auto day = r.first; day <= r.last; day += std::chrono::days{1}) {
      for (int h = 0; h < 24; ++h) {
        if (hours.size() == config.n_hours) return hours;
        hours.push_back(Hour{day} + std::chrono::hours{h});
      }
    }
  }
  return hours;
}

// Distance from each point to its nearest other point, by latitude sweep.
std::vector<double> nearest_neighbour_distances(std::span<const Cell> cells) {
  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cells[a].centroid.lat < cells[b].centroid.lat;
  });
  constexpr double kMetersPerDegree = kEarthRadiusMeters * std::numbers::pi / 180.0;
  std::vector<double> nn(cells.size(), std::numeric_limits<double>::infinity());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const GeoPoint p = cells[order[pos]].centroid;
    double& best = nn[order[pos]];
    for (std::size_t q = pos + 1; q < order.size(); ++q) {
      const GeoPoint o = cells[order[q]].centroid;
      if ((o.lat - p.lat) * kMetersPerDegree > best) break;
      best = std::min(best, haversine_distance(p, o));
    }
    for (std::size_t q = pos; q-- > 0;) {
      const GeoPoint o = cells[order[q]].centroid;
      if ((p.lat - o.lat) * kMetersPerDegree > best) break;
      best = std::min(best, haversine_distance(p, o));
    }
  }
  return nn;
}

struct CellOutput {
  std::vector<HourlyObservation> hourly;
  std::vector<CrimeEvent> crimes;
};

}  // namespace

std::vector<std::string> plantable_features() {
  return {kAthomeVariability, kYouthVariability, kSeniorRhythm};
}

std::vector<std::string> default_planted_features() { return plantable_features(); }

void SyntheticConfig::validate() const {
  if (n_cells < 2) fail(ErrorKind::kConfig, "synthetic n_cells must be >= 2");
  if (n_hours < 24) fail(ErrorKind::kConfig, "synthetic n_hours must be >= 24");
  if (n_profiles < 1) fail(ErrorKind::kConfig, "synthetic n_profiles must be >= 1");
  if (!(bbox.lat_min < bbox.lat_max) || !(bbox.lon_min < bbox.lon_max) ||
      !GeoPoint{bbox.lat_min, bbox.lon_min}.valid() || !GeoPoint{bbox.lat_max, bbox.lon_max}.valid())
    fail(ErrorKind::kConfig, "synthetic bounding box is degenerate or out of range");
  if (!(signal_strength >= 0.0 && signal_strength <= 1.0))
    fail(ErrorKind::kConfig, "signal_strength must lie in [0, 1]");
  const auto known = plantable_features();
  for (const auto& name : planted_features)
    if (std::find(known.begin(), known.end(), name) == known.end())
      fail(ErrorKind::kConfig, "feature '" + name + "' cannot be planted");
  if (period.empty()) fail(ErrorKind::kConfig, "observation period is empty");
  std::size_t capacity = 0;
  for (const auto& r : period) {
    if (r.last < r.first) fail(ErrorKind::kConfig, "observation range ends before it starts");
    capacity += static_cast<std::size_t>((r.last - r.first).count() + 1) * 24;
  }
  if (n_hours > capacity)
    fail(ErrorKind::kConfig, "n_hours exceeds the observation period (" +
                                 std::to_string(capacity) + " hours)");
  if (!target_month.valid() || !previous_month.valid())
    fail(ErrorKind::kConfig, "invalid crime month");
}

SyntheticDataset generate_synthetic(const SyntheticConfig& config, unsigned threads) {
  config.validate();
  const auto hours = calendar_hours(config);

  // Day index per hour, counting distinct calendar days in order.
  std::vector<std::size_t> day_of_hour(hours.size());
  std::size_t n_days = 0;
  for (std::size_t i = 0; i < hours.size(); ++i) {
    if (i > 0 && std::chrono::floor<std::chrono::days>(hours[i]) !=
                     std::chrono::floor<std::chrono::days>(hours[i - 1]))
      ++n_days;
    day_of_hour[i] = n_days;
  }
  ++n_days;

  const BoundingBox& box = config.bbox;
  std::vector<Cell> cells;
  cells.reserve(config.n_cells);
  {
    Rng rng = Rng::stream(config.seed, hash_string("cells"));
    for (std::size_t i = 0; i < config.n_cells; ++i) {
      Cell c;
      c.id = CellId{i + 1};
      c.centroid.lat = rng.uniform(box.lat_min, box.lat_max);
      c.centroid.lon = rng.uniform(box.lon_min, box.lon_max);
      c.surface_area = round3(150000.0 * std::exp(0.5 * rng.normal()));
      cells.push_back(c);
    }
  }

  std::vector<BoroughProfile> profiles(config.n_profiles);
  std::vector<double> borough_latent(config.n_profiles);
  {
    Rng rng = Rng::stream(config.seed, hash_string("profiles"));
    for (std::size_t p = 0; p < config.n_profiles; ++p) {
      char id[32];
      std::snprintf(id, sizeof(id), "E09%06zu", p + 1);
      profiles[p].profile_id = id;
      profiles[p].representative_point = {rng.uniform(box.lat_min, box.lat_max),
                                          rng.uniform(box.lon_min, box.lon_max)};
      borough_latent[p] = rng.normal();
      for (std::size_t k = 0; k < kBoroughMetrics; ++k) {
        // The first six metrics load on the borough latent; the rest are noise.
        const double z = k < 6 ? 0.8 * borough_latent[p] + 0.6 * rng.normal() : rng.normal();
        const double scale = std::pow(10.0, static_cast<double>(k % 4));
        profiles[p].metrics[k] = round3(scale * (5.0 + z));
      }
    }
  }

  CellUniverse universe(cells);
  const auto cell_profile = georeference_profiles(profiles, universe);
  const auto nn = nearest_neighbour_distances(universe.cells());

  std::vector<double> plant_weight(3, 0.0);
  {
    const auto known = plantable_features();
    for (std::size_t i = 0; i < known.size(); ++i)
      if (std::find(config.planted_features.begin(), config.planted_features.end(), known[i]) !=
          config.planted_features.end())
        plant_weight[i] = kPlantWeights[i];
  }
  double plant_norm = 0.0;
  for (double w : plant_weight) plant_norm += w * w;
  plant_norm = std::sqrt(plant_norm);
  const double behaviour_share = plant_norm > 0.0 ? kBehaviourShare : 0.0;
  const double borough_share = plant_norm > 0.0 ? kBoroughShare : 1.0;
  const auto crime_types = default_crime_types();
  const double s = config.signal_strength;

  std::vector<CellOutput> per_cell(universe.size());
  parallel_for(universe.size(), threads, [&](std::size_t ci) {
    const Cell& cell = universe.cells()[ci];
    Rng rng = Rng::stream(config.seed, to_u64(cell.id));
    CellOutput& out = per_cell[ci];

    // Latents, always drawn in the same order so planting never shifts streams.
    const double z_home = rng.normal();
    const double z_youth = rng.normal();
    const double z_senior = rng.normal();
    const double eta = rng.normal();

    const double footfall_level = std::exp(rng.normal(std::log(600.0), 0.7));
    const double footfall_swing = rng.uniform(0.2, 0.6);
    const double home_level = rng.uniform(0.15, 0.55);
    const double home_swing = rng.uniform(0.03, 0.15);
    const double home_day_sd = 0.02 * std::exp(kPlantSlope * z_home);
    const double work_share = rng.uniform(0.3, 0.7);
    const double male_share = rng.uniform(0.45, 0.55);
    std::array<double, kAgeBrackets> age_weight{};
    double weight_sum = 0.0;
    for (auto& w : age_weight) {
      w = rng.uniform(0.5, 1.5);
      weight_sum += w;
    }
    for (auto& w : age_weight) w /= weight_sum;
    const double youth_day_sd = 0.015 * std::exp(kPlantSlope * z_youth);
    const double youth_swing = rng.uniform(0.0, 0.03);
    const double senior_swing = 0.018 * std::exp(kPlantSlope * z_senior);

    // senior_level is a day-level nuisance: it moves the overall spread of the
    // senior share without touching its within-day rhythm.
    std::vector<double> home_shift(n_days), youth_shift(n_days), senior_level(n_days),
        footfall_day(n_days), work_day(n_days), senior_gain(n_days);
    for (std::size_t d = 0; d < n_days; ++d) {
      home_shift[d] = rng.normal(0.0, home_day_sd);
      youth_shift[d] = rng.normal(0.0, youth_day_sd);
      senior_level[d] = rng.normal(0.0, kSeniorDayNoise);
      footfall_day[d] = std::exp(rng.normal(0.0, kFootfallDayNoise));
      work_day[d] = rng.normal(0.0, kWorkDayNoise);
      senior_gain[d] = std::exp(rng.normal(0.0, kSeniorGainNoise));
    }

    out.hourly.reserve(hours.size());
    for (std::size_t t = 0; t < hours.size(); ++t) {
      const auto day_start = std::chrono::floor<std::chrono::days>(hours[t]);
      const double h = static_cast<double>((hours[t] - day_start).count());
      const std::size_t d = day_of_hour[t];

      const double footfall =
          footfall_level * footfall_day[d] *
          (1.0 + footfall_swing * std::cos(kTwoPi * (h - 14.0) / 24.0)) *
          std::exp(0.15 * rng.normal());
      const double home = std::clamp(
          home_level + home_swing * std::cos(kTwoPi * (h - 3.0) / 24.0) + home_shift[d] +
              kHomeNoise * rng.normal(),
          0.01, 0.98);
      const double work = std::clamp(work_share + work_day[d] + 0.05 * rng.normal(), 0.05, 0.95);
      const double male = std::clamp(male_share + 0.02 * rng.normal(), 0.05, 0.95);
      const double youth =
          std::clamp(age_weight[0] + youth_swing * std::cos(kTwoPi * (h - 20.0) / 24.0) +
                         youth_shift[d] + kYouthNoise * rng.normal(),
                     0.005, 0.45);
      const double senior = std::clamp(
          age_weight[5] + senior_level[d] + senior_gain[d] * senior_swing * std::cos(kTwoPi * (h - 11.0) / 24.0) +
              kSeniorNoise * rng.normal(),
          0.005, 0.45);
      const double middle = 1.0 - youth - senior;
      std::array<double, 4> middle_mix{};
      double mix_sum = 0.0;
      for (std::size_t k = 0; k < 4; ++k) {
        middle_mix[k] = age_weight[k + 1] * std::exp(kMiddleJitter * rng.normal());
        mix_sum += middle_mix[k];
      }

      HourlyObservation obs;
      obs.cell = cell.id;
      obs.hour_start = hours[t];
      obs.footfall = round3(footfall);
      obs.residents = round3(footfall * home);
      obs.workers = round3(footfall * (1.0 - home) * work);
      obs.visitors = round3(footfall * (1.0 - home) * (1.0 - work));
      obs.males = round3(footfall * male);
      obs.females = round3(obs.footfall - obs.males);
      obs.age[0] = round3(footfall * youth);
      for (std::size_t k = 1; k < 5; ++k)
        obs.age[k] = round3(footfall * middle * middle_mix[k - 1] / mix_sum);
      obs.age[5] = round3(footfall * senior);
      out.hourly.push_back(obs);
    }

    const double planted = plant_norm > 0.0 ? (plant_weight[0] * z_home + plant_weight[1] * z_youth +
                                               plant_weight[2] * z_senior) /
                                                  plant_norm
                                            : 0.0;
    const double borough = borough_latent[cell_profile.at(cell.id)];
    const double latent = s * (behaviour_share * planted + borough_share * borough) +
                          std::sqrt(1.0 - s * s) * eta;
    const double rate = kCrimeBaseRate * std::exp(kCrimeLogSlope * latent);

    // Jitter radius below half the nearest-neighbour distance keeps the
    // generating cell the unique nearest centroid.
    const double radius = std::min(0.45 * nn[ci], 250.0);
    char lsoa[16];
    std::snprintf(lsoa, sizeof(lsoa), "E01%06llu",
                  static_cast<unsigned long long>(to_u64(cell.id) % 1000000));
    for (const YearMonth month : {config.previous_month, config.target_month}) {
      const auto count = rng.poisson(rate);
      for (std::uint64_t k = 0; k < count; ++k) {
        const double bearing = rng.uniform(0.0, kTwoPi);
        const double dist = radius * std::sqrt(rng.uniform());
        const double dlat = dist / kEarthRadiusMeters * std::cos(bearing);
        const double dlon = dist / kEarthRadiusMeters * std::sin(bearing) /
                            std::cos(cell.centroid.lat * std::numbers::pi / 180.0);
        CrimeEvent e;
        char id[64];
        std::snprintf(id, sizeof(id), "%010llu-%04d%02u-%05llu",
                      static_cast<unsigned long long>(to_u64(cell.id)), month.year, month.month,
                      static_cast<unsigned long long>(k));
        e.crime_id = id;
        e.month = month;
        e.location = {cell.centroid.lat + dlat * 180.0 / std::numbers::pi,
                      cell.centroid.lon + dlon * 180.0 / std::numbers::pi};
        e.lsoa_code = lsoa;
        e.crime_type = crime_types[rng.below(crime_types.size())];
        out.crimes.push_back(std::move(e));
      }
    }
  });

  SyntheticDataset data{std::move(universe), {}, {}, std::move(profiles)};
  std::size_t n_hourly = 0;
  for (const auto& c : per_cell) n_hourly += c.hourly.size();
  data.hourly.reserve(n_hourly);
  for (auto& c : per_cell) {
    data.hourly.insert(data.hourly.end(), c.hourly.begin(), c.hourly.end());
    for (auto& e : c.crimes) data.crimes.push_back(std::move(e));
  }
  return data;
}

}  // namespace hotspot
