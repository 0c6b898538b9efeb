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

#include "hotspot/geo_index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>

#include "hotspot/error.hpp"
#include "hotspot/text.hpp"

namespace hotspot {

bool GeoPoint::valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
         lon >= -180.0 && lon <= 180.0;
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string describe(GeoPoint p) {
  return "(" + format_double(p.lat) + ", " + format_double(p.lon) + ")";
}

}  // namespace

double haversine_distance(GeoPoint a, GeoPoint b) {
  if (!std::isfinite(a.lat) || !std::isfinite(a.lon) || !std::isfinite(b.lat) ||
      !std::isfinite(b.lon))
    fail(ErrorKind::kInput, "non-finite coordinate in distance computation");
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double s_lat = std::sin((phi2 - phi1) / 2.0);
  const double s_lon = std::sin((b.lon - a.lon) * kDegToRad / 2.0);
  const double h = s_lat * s_lat + std::cos(phi1) * std::cos(phi2) * s_lon * s_lon;
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

PointIndex::PointIndex(std::vector<GeoPoint> points) : points_(std::move(points)) {
  by_lat_.resize(points_.size());
  for (std::size_t i = 0; i < by_lat_.size(); ++i) by_lat_[i] = i;
  std::stable_sort(by_lat_.begin(), by_lat_.end(), [&](std::size_t a, std::size_t b) {
    return points_[a].lat < points_[b].lat;
  });
  sorted_lat_.reserve(by_lat_.size());
  for (auto i : by_lat_) sorted_lat_.push_back(points_[i].lat);
}

std::size_t PointIndex::nearest(GeoPoint query) const {
  if (points_.empty()) fail(ErrorKind::kConfig, "nearest-point query on an empty set");
  if (!query.valid()) fail(ErrorKind::kInput, "invalid query point " + describe(query));

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_ordinal = points_.size();
  auto consider = [&](std::size_t ordinal) {
    const double d = haversine_distance(query, points_[ordinal]);
    if (d < best || (d == best && ordinal < best_ordinal)) {
      best = d;
      best_ordinal = ordinal;
    }
  };
  // Meridian arc length is a lower bound on great-circle distance; the slack
  // absorbs rounding so no point at exactly the best distance is pruned.
  auto lat_bound = [&](double lat) {
    return std::abs(lat - query.lat) * kDegToRad * kEarthRadiusMeters;
  };
  auto prunable = [&](double bound) { return bound > best * (1.0 + 1e-9) + 1e-6; };

  const auto mid = static_cast<std::size_t>(
      std::lower_bound(sorted_lat_.begin(), sorted_lat_.end(), query.lat) - sorted_lat_.begin());
  std::size_t up = mid;     // next index to visit going north
  std::size_t down = mid;   // one past the next index going south
  bool up_open = up < sorted_lat_.size();
  bool down_open = down > 0;
  while (up_open || down_open) {
    const double up_bound = up_open ? lat_bound(sorted_lat_[up]) : INFINITY;
    const double down_bound = down_open ? lat_bound(sorted_lat_[down - 1]) : INFINITY;
    if (up_bound <= down_bound) {
      if (prunable(up_bound)) break;
      consider(by_lat_[up]);
      ++up;
      up_open = up < sorted_lat_.size();
    } else {
      if (prunable(down_bound)) break;
      consider(by_lat_[down - 1]);
      --down;
      down_open = down > 0;
    }
  }
  return best_ordinal;
}

CellUniverse::CellUniverse(std::vector<Cell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) fail(ErrorKind::kConfig, "cell universe is empty");
  std::sort(cells_.begin(), cells_.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (i > 0 && cells_[i - 1].id == c.id)
      fail(ErrorKind::kInput, "duplicate cell_id " + std::to_string(to_u64(c.id)));
    if (!c.centroid.valid())
      fail(ErrorKind::kInput, "cell " + std::to_string(to_u64(c.id)) + " has invalid centroid " +
                                  describe(c.centroid));
    if (!std::isfinite(c.surface_area) || c.surface_area <= 0.0)
      fail(ErrorKind::kInput,
           "cell " + std::to_string(to_u64(c.id)) + " has non-positive surface area");
  }
  std::vector<GeoPoint> points;
  points.reserve(cells_.size());
  for (const Cell& c : cells_) points.push_back(c.centroid);
  index_ = PointIndex(std::move(points));
}

std::size_t CellUniverse::index_of(CellId id) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), id,
                             [](const Cell& c, CellId v) { return c.id < v; });
  if (it == cells_.end() || it->id != id) return cells_.size();
  return static_cast<std::size_t>(it - cells_.begin());
}

const Cell* CellUniverse::find(CellId id) const {
  const std::size_t i = index_of(id);
  return i == cells_.size() ? nullptr : &cells_[i];
}

CellId CellUniverse::nearest_cell(GeoPoint p) const {
  // Ordinals follow ascending cell_id, so the ordinal tie rule is the id rule.
  return cells_[index_.nearest(p)].id;
}

EventAssignment georeference_events(std::span<const CrimeEvent> events,
                                    const CellUniverse& universe) {
  EventAssignment out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const CrimeEvent& e = events[i];
    if (!e.location.valid()) {
      const std::size_t line = e.source_line != 0 ? e.source_line : i + 1;
      out.rejections.push_back({line, "invalid coordinates " + describe(e.location)});
      continue;
    }
    out.by_cell[universe.nearest_cell(e.location)].push_back(e);
  }
  return out;
}

std::map<CellId, std::size_t> georeference_profiles(std::span<const BoroughProfile> profiles,
                                                    const CellUniverse& universe) {
  if (profiles.empty()) fail(ErrorKind::kConfig, "no borough profiles to georeference");
  std::vector<std::size_t> order(profiles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return profiles[a].profile_id < profiles[b].profile_id;
  });
  std::vector<GeoPoint> points;
  points.reserve(order.size());
  for (auto i : order) {
    if (!profiles[i].representative_point.valid())
      fail(ErrorKind::kInput, "profile " + profiles[i].profile_id + " has invalid location");
    points.push_back(profiles[i].representative_point);
  }
  const PointIndex index(std::move(points));
  std::map<CellId, std::size_t> out;
  for (const Cell& c : universe.cells()) out.emplace(c.id, order[index.nearest(c.centroid)]);
  return out;
}

CellUniverse load_cells(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row)) fail(ErrorKind::kSchema, path + ": missing header");
  const auto col = require_columns(row, {"cell_id", "lat", "lon", "area_m2"}, path);
  std::vector<Cell> cells;
  while (reader.next(row)) {
    auto field = [&](std::size_t k) -> std::string_view {
      if (col[k] >= row.size())
        fail(ErrorKind::kInput, path + ":" + std::to_string(reader.line()) + ": short row");
      return row[col[k]];
    };
    const auto id = parse_uint(field(0));
    const auto lat = parse_double(field(1));
    const auto lon = parse_double(field(2));
    const auto area = parse_double(field(3));
    if (!id || !lat || !lon || !area)
      fail(ErrorKind::kInput, path + ":" + std::to_string(reader.line()) + ": malformed cell row");
    cells.push_back({CellId{*id}, {*lat, *lon}, *area});
  }
  return CellUniverse(std::move(cells));
}

std::string cells_to_csv(const CellUniverse& universe) {
  std::string out = "cell_id,lat,lon,area_m2\n";
  for (const Cell& c : universe.cells()) {
    out += std::to_string(to_u64(c.id));
    out += ',';
    append_double(out, c.centroid.lat);
    out += ',';
    append_double(out, c.centroid.lon);
    out += ',';
    append_double(out, c.surface_area);
    out += '\n';
  }
  return out;
}

}  // namespace hotspot
