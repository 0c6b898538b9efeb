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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hotspot/records.hpp"

namespace hotspot {

// Mean Earth radius (IUGG), meters.
inline constexpr double kEarthRadiusMeters = 6371008.8;

// Great-circle distance on the sphere of radius kEarthRadiusMeters.
// Throws kInput on non-finite coordinates.
double haversine_distance(GeoPoint a, GeoPoint b);

// Nearest-point queries over a fixed point set. Points are swept in latitude
// order; a query stops once the latitude gap alone exceeds the best distance
// found. Ties resolve to the lowest ordinal (position in the input vector),
// so results match an exhaustive scan exactly.
class PointIndex {
 public:
  PointIndex() = default;
  explicit PointIndex(std::vector<GeoPoint> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  // Ordinal of the nearest point. Throws kConfig when empty.
  std::size_t nearest(GeoPoint query) const;

 private:
  std::vector<GeoPoint> points_;
  std::vector<std::size_t> by_lat_;   // ordinals sorted by latitude
  std::vector<double> sorted_lat_;    // latitudes in by_lat_ order
};

class CellUniverse {
 public:
  // Validates ids (unique), centroids and areas; sorts by ascending id.
  // Throws kConfig on an empty list and kInput on invalid cells.
  explicit CellUniverse(std::vector<Cell> cells);

  std::span<const Cell> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  // Position of the id in cells(), or size() when absent.
  std::size_t index_of(CellId id) const;
  const Cell* find(CellId id) const;

  CellId nearest_cell(GeoPoint p) const;

  friend bool operator==(const CellUniverse& a, const CellUniverse& b) {
    return a.cells_ == b.cells_;
  }

 private:
  std::vector<Cell> cells_;
  PointIndex index_;
};

struct GeoRejection {
  std::size_t line;
  std::string reason;
};

struct EventAssignment {
  std::map<CellId, std::vector<CrimeEvent>> by_cell;
  std::vector<GeoRejection> rejections;
};

EventAssignment georeference_events(std::span<const CrimeEvent> events,
                                    const CellUniverse& universe);

// Maps every cell to the profile whose representative point is nearest to the
// cell centroid. Ties go to the lexicographically smallest profile_id.
// Returned values index into `profiles`.
std::map<CellId, std::size_t> georeference_profiles(std::span<const BoroughProfile> profiles,
                                                    const CellUniverse& universe);

// Cell universe CSV: cell_id,lat,lon,area_m2
CellUniverse load_cells(const std::string& path);
std::string cells_to_csv(const CellUniverse& universe);

}  // namespace hotspot
