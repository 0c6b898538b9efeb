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

#include "hotspot/geojson.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <vector>

#include "hotspot/error.hpp"

namespace hotspot {

std::string export_geojson(std::span<const MapEntry> entries, const CellUniverse& universe) {
  std::vector<MapEntry> sorted(entries.begin(), entries.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const MapEntry& a, const MapEntry& b) { return a.cell < b.cell; });
  if (std::adjacent_find(sorted.begin(), sorted.end(), [](const MapEntry& a, const MapEntry& b) {
        return a.cell == b.cell;
      }) != sorted.end())
    fail(ErrorKind::kSchema, "duplicate cell in map entries");

  nlohmann::json features = nlohmann::json::array();
  for (const auto& e : sorted) {
    const Cell* cell = universe.find(e.cell);
    if (!cell)
      fail(ErrorKind::kSchema,
           "cell " + std::to_string(to_u64(e.cell)) + " is not in the cell universe");
    if (!std::isfinite(e.score)) fail(ErrorKind::kInput, "map score must be finite");
    const bool high = e.cls == CrimeClass::kHigh;
    features.push_back({
        {"type", "Feature"},
        {"geometry",
         {{"type", "Point"}, {"coordinates", {cell->centroid.lon, cell->centroid.lat}}}},
        {"properties",
         {{"cell_id", to_u64(e.cell)},
          {"class", high ? "high" : "low"},
          {"score", e.score},
          {"marker-color", high ? kHighColor : kLowColor}}},
    });
  }
  const nlohmann::json collection = {{"type", "FeatureCollection"}, {"features", features}};
  return collection.dump(1) + "\n";
}

}  // namespace hotspot
