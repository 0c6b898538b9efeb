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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hotspot/feature_factory.hpp"
#include "hotspot/feature_select.hpp"
#include "hotspot/ingestion.hpp"
#include "hotspot/labeling.hpp"
#include "hotspot/random_forest.hpp"

namespace hotspot {

enum class DataSource { kSynthetic, kFiles };

// Settings shared by every stage. Keys accepted by set():
//   data = synthetic | files
//   cells, hourly, crimes, profiles     input CSVs when data = files
//   out                                 artifact directory
//   month = YYYY-MM                     month whose crimes are labeled
//   windows = hourly,4hourly,daily      granularities besides monthly
//   top_k, trees, mtry, subsample, replacement, max_depth, min_leaf
//   seed                                fallback for the three seeds below
//   forest.seed, split.seed, synth.seed
//   split_fraction, corr_threshold, include_zero_cells, kurtosis = raw | excess
//   synth.cells, synth.hours, synth.profiles, synth.signal, synth.planted
//   threads                             0 = hardware concurrency
struct PipelineConfig {
  DataSource data = DataSource::kSynthetic;
  std::string cells_path;
  std::string hourly_path;
  std::string crimes_path;
  std::string profiles_path;
  std::string out_dir = "hotspot_out";

  YearMonth month{2013, 1};
  WindowSet windows;
  std::size_t top_k = 68;
  ForestParams forest{};
  double split_fraction = 0.8;
  double corr_threshold = 0.8;
  bool include_zero_cells = false;
  KurtosisConvention kurtosis = KurtosisConvention::kRaw;

  std::uint64_t seed = 1;
  std::optional<std::uint64_t> forest_seed;
  std::optional<std::uint64_t> split_seed;
  std::optional<std::uint64_t> synth_seed;
  SyntheticConfig synth;

  unsigned threads = 0;

  // Throws kConfig for unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  // Checks cross-field rules, e.g. that input paths match the data source.
  void validate() const;

  ForestParams resolved_forest() const;
  std::uint64_t resolved_split_seed() const;
  SyntheticConfig resolved_synth() const;

  // Canonical key = value listing (threads omitted: it never changes output).
  std::string to_text() const;
};

// Flat "key = value" lines; '#' starts a comment. Applied on top of `config`.
void load_config_file(PipelineConfig& config, const std::string& path);

std::string artifact_path(const PipelineConfig& config, std::string_view name);

// Feature columns of each compared model, in model order.
struct ModelSpec {
  std::string name;
  std::vector<std::string> features;
};
std::vector<ModelSpec> model_specs(const FeatureRanking& ranking, std::size_t top_k);

void cmd_synth(const PipelineConfig& config);
void cmd_featurize(const PipelineConfig& config);
void cmd_label(const PipelineConfig& config);
void cmd_select(const PipelineConfig& config);
void cmd_train(const PipelineConfig& config);
void cmd_evaluate(const PipelineConfig& config);
void cmd_export_map(const PipelineConfig& config);
// Text report assembled from the stored artifacts.
std::string cmd_report(const PipelineConfig& config);
// synth (synthetic data only), featurize, label, select, train, evaluate,
// export-map.
void cmd_run(const PipelineConfig& config);

}  // namespace hotspot
