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

#include <span>
#include <string>
#include <string_view>

#include "hotspot/geo_index.hpp"
#include "hotspot/labeling.hpp"

namespace hotspot {

inline constexpr std::string_view kLowColor = "#2ca02c";
inline constexpr std::string_view kHighColor = "#d62728";

struct MapEntry {
  CellId cell{};
  CrimeClass cls = CrimeClass::kLow;
  double score = 0.0;
};

// FeatureCollection with one Point per entry at the cell centroid, ordered by
// cell id. Throws kSchema when a cell is not in the universe.
std::string export_geojson(std::span<const MapEntry> entries, const CellUniverse& universe);

}  // namespace hotspot
