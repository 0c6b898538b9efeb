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

#include "hotspot/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <unordered_set>

#include "hotspot/error.hpp"
#include "hotspot/evaluation.hpp"
#include "hotspot/geojson.hpp"
#include "hotspot/log.hpp"
#include "hotspot/text.hpp"

namespace hotspot {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  fail(ErrorKind::kConfig,
       "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  auto v = parse_uint(value);
  if (!v) bad_value(key, value);
  return *v;
}

double to_double(std::string_view key, std::string_view value) {
  auto v = parse_double(value);
  if (!v || !std::isfinite(*v)) bad_value(key, value);
  return *v;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  bad_value(key, value);
}

std::optional<std::size_t> to_optional(std::string_view key, std::string_view value) {
  if (value == "none" || value == "auto") return std::nullopt;
  return static_cast<std::size_t>(to_uint(key, value));
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

YearMonth previous(YearMonth m) {
  return m.month == 1 ? YearMonth{m.year - 1, 12} : YearMonth{m.year, m.month - 1};
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "data") {
    if (value == "synthetic")
      data = DataSource::kSynthetic;
    else if (value == "files")
      data = DataSource::kFiles;
    else
      bad_value(key, value);
  } else if (key == "cells") {
    cells_path = value;
  } else if (key == "hourly") {
    hourly_path = value;
  } else if (key == "crimes") {
    crimes_path = value;
  } else if (key == "profiles") {
    profiles_path = value;
  } else if (key == "out") {
    if (value.empty()) bad_value(key, value);
    out_dir = value;
  } else if (key == "month") {
    if (!parse_year_month(value, month)) bad_value(key, value);
  } else if (key == "windows") {
    WindowSet w{false, false, false};
    for (const auto& part : split(value, ',')) {
      const auto token = trim(part);
      if (token == "hourly")
        w.hourly = true;
      else if (token == "4hourly")
        w.four_hourly = true;
      else if (token == "daily")
        w.daily = true;
      else if (!token.empty() && token != "monthly")
        bad_value(key, value);
    }
    windows = w;
  } else if (key == "top_k") {
    top_k = to_uint(key, value);
  } else if (key == "trees") {
    forest.n_trees = to_uint(key, value);
  } else if (key == "mtry") {
    forest.mtry = to_optional(key, value);
  } else if (key == "subsample") {
    forest.subsample_fraction = to_double(key, value);
  } else if (key == "replacement") {
    forest.sample_with_replacement = to_bool(key, value);
  } else if (key == "max_depth") {
    forest.max_depth = to_optional(key, value);
  } else if (key == "min_leaf") {
    forest.min_samples_leaf = to_uint(key, value);
  } else if (key == "seed") {
    seed = to_uint(key, value);
  } else if (key == "forest.seed") {
    forest_seed = to_uint(key, value);
  } else if (key == "split.seed") {
    split_seed = to_uint(key, value);
  } else if (key == "synth.seed") {
    synth_seed = to_uint(key, value);
  } else if (key == "split_fraction") {
    split_fraction = to_double(key, value);
  } else if (key == "corr_threshold") {
    corr_threshold = to_double(key, value);
  } else if (key == "include_zero_cells") {
    include_zero_cells = to_bool(key, value);
  } else if (key == "kurtosis") {
    if (value == "raw")
      kurtosis = KurtosisConvention::kRaw;
    else if (value == "excess")
      kurtosis = KurtosisConvention::kExcess;
    else
      bad_value(key, value);
  } else if (key == "synth.cells") {
    synth.n_cells = to_uint(key, value);
  } else if (key == "synth.hours") {
    synth.n_hours = to_uint(key, value);
  } else if (key == "synth.profiles") {
    synth.n_profiles = to_uint(key, value);
  } else if (key == "synth.signal") {
    synth.signal_strength = to_double(key, value);
  } else if (key == "synth.planted") {
    synth.planted_features.clear();
    for (const auto& part : split(value, ','))
      if (!trim(part).empty()) synth.planted_features.emplace_back(trim(part));
  } else if (key == "threads") {
    threads = static_cast<unsigned>(to_uint(key, value));
  } else {
    fail(ErrorKind::kConfig, "unknown configuration key '" + std::string(key) + "'");
  }
}

void PipelineConfig::validate() const {
  const bool any_path = !cells_path.empty() || !hourly_path.empty() || !crimes_path.empty() ||
                        !profiles_path.empty();
  if (data == DataSource::kFiles) {
    if (cells_path.empty() || hourly_path.empty() || crimes_path.empty() ||
        profiles_path.empty())
      fail(ErrorKind::kConfig, "data = files needs cells, hourly, crimes and profiles paths");
  } else {
    if (any_path)
      fail(ErrorKind::kConfig, "input paths are only allowed with data = files");
    resolved_synth().validate();
  }
  if (!month.valid()) fail(ErrorKind::kConfig, "month is invalid");
  if (top_k == 0) fail(ErrorKind::kConfig, "top_k must be positive");
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    fail(ErrorKind::kConfig, "split_fraction must lie in (0, 1)");
  if (!(corr_threshold >= 0.0)) fail(ErrorKind::kConfig, "corr_threshold must be >= 0");
  resolved_forest().validate(std::max<std::size_t>(1, forest.mtry.value_or(1)));
}

ForestParams PipelineConfig::resolved_forest() const {
  ForestParams p = forest;
  p.seed = forest_seed.value_or(seed);
  return p;
}

std::uint64_t PipelineConfig::resolved_split_seed() const { return split_seed.value_or(seed); }

SyntheticConfig PipelineConfig::resolved_synth() const {
  SyntheticConfig s = synth;
  s.seed = synth_seed.value_or(seed);
  s.target_month = month;
  s.previous_month = previous(month);
  return s;
}

std::string PipelineConfig::to_text() const {
  const auto opt = [](const std::optional<std::size_t>& v) {
    return v ? std::to_string(*v) : std::string("none");
  };
  std::vector<std::string> windows_list;
  if (windows.hourly) windows_list.emplace_back("hourly");
  if (windows.four_hourly) windows_list.emplace_back("4hourly");
  if (windows.daily) windows_list.emplace_back("daily");
  const auto f = resolved_forest();
  std::string out;
  auto line = [&](std::string_view k, const std::string& v) {
    out += std::string(k) + " = " + v + "\n";
  };
  line("data", data == DataSource::kFiles ? "files" : "synthetic");
  if (data == DataSource::kFiles) {
    line("cells", cells_path);
    line("hourly", hourly_path);
    line("crimes", crimes_path);
    line("profiles", profiles_path);
  } else {
    const auto s = resolved_synth();
    line("synth.seed", std::to_string(s.seed));
    line("synth.cells", std::to_string(s.n_cells));
    line("synth.hours", std::to_string(s.n_hours));
    line("synth.profiles", std::to_string(s.n_profiles));
    line("synth.signal", format_double(s.signal_strength));
    line("synth.planted", join(s.planted_features, ','));
  }
  line("month", format_year_month(month));
  line("windows", join(windows_list, ','));
  line("top_k", std::to_string(top_k));
  line("trees", std::to_string(f.n_trees));
  line("mtry", opt(f.mtry));
  line("subsample", format_double(f.subsample_fraction));
  line("replacement", f.sample_with_replacement ? "true" : "false");
  line("max_depth", opt(f.max_depth));
  line("min_leaf", std::to_string(f.min_samples_leaf));
  line("forest.seed", std::to_string(f.seed));
  line("split.seed", std::to_string(resolved_split_seed()));
  line("split_fraction", format_double(split_fraction));
  line("corr_threshold", format_double(corr_threshold));
  line("include_zero_cells", include_zero_cells ? "true" : "false");
  line("kurtosis", kurtosis == KurtosisConvention::kRaw ? "raw" : "excess");
  return out;
}

void load_config_file(PipelineConfig& config, const std::string& path) {
  const std::string text = read_file(path);
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorKind::kConfig, path + ":" + std::to_string(line_no) + ": expected key = value");
    try {
      config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      fail(e.kind(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string artifact_path(const PipelineConfig& config, std::string_view name) {
  return (std::filesystem::path(config.out_dir) / name).string();
}

std::vector<ModelSpec> model_specs(const FeatureRanking& ranking, std::size_t top_k) {
  std::vector<std::string> combined, smartsteps, borough;
  for (const auto& f : ranking.features) {
    if (combined.size() < top_k) combined.push_back(f.name);
    if (is_smartsteps_feature(f.name) && smartsteps.size() < top_k)
      smartsteps.push_back(f.name);
    if (is_borough_feature(f.name)) borough.push_back(f.name);
  }
  if (combined.size() < top_k)
    fail(ErrorKind::kConfig, "top_k " + std::to_string(top_k) + " exceeds the " +
                                 std::to_string(ranking.features.size()) + " ranked features");
  std::vector<ModelSpec> specs;
  specs.push_back({"combined", std::move(combined)});
  if (!smartsteps.empty()) specs.push_back({"smartsteps", std::move(smartsteps)});
  if (!borough.empty()) {
    std::sort(borough.begin(), borough.end());
    specs.push_back({"borough", std::move(borough)});
  }
  return specs;
}

namespace {

void ensure_out_dir(const PipelineConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create " + config.out_dir + ": " + ec.message());
}

struct InputPaths {
  std::string cells, hourly, crimes, profiles;
};

InputPaths inputs(const PipelineConfig& config) {
  if (config.data == DataSource::kFiles)
    return {config.cells_path, config.hourly_path, config.crimes_path, config.profiles_path};
  return {artifact_path(config, "cells.csv"), artifact_path(config, "hourly.csv"),
          artifact_path(config, "crimes.csv"), artifact_path(config, "profiles.csv")};
}

void require_file(const std::string& path, std::string_view stage) {
  if (!std::filesystem::exists(path))
    fail(ErrorKind::kIo, path + " not found; run '" + std::string(stage) + "' first");
}

template <typename T>
void report_rejections(const std::string& what, const LoadResult<T>& r) {
  if (r.rejections.empty()) return;
  log::warn(what + ": " + std::to_string(r.rejections.size()) + " rows rejected (first at line " +
            std::to_string(r.rejections.front().line) + ": " + r.rejections.front().reason + ")");
}

// Cells that carry a label, in ascending order; all must have feature rows.
std::vector<CellId> labeled_cells(const FeatureMatrix& features, const LabelSet& labels) {
  std::vector<CellId> ids;
  for (const auto& [id, cls] : labels.labels) {
    if (!features.row_index(id))
      fail(ErrorKind::kSchema,
           "labeled cell " + std::to_string(to_u64(id)) + " has no feature row");
    ids.push_back(id);
  }
  return ids;
}

std::string model_file(const PipelineConfig& config, const std::string& name) {
  return artifact_path(config, "model_" + name + ".hsf");
}

struct SelectionState {
  FeatureMatrix features;
  LabelSet labels;
  SplitPlan plan;
  NormalizationStats stats;
};

SelectionState load_selection_inputs(const PipelineConfig& config) {
  for (const char* name : {"features.csv", "labels.csv", "split.csv", "normalizer.csv"})
    require_file(artifact_path(config, name), "select");
  SelectionState s;
  s.features = load_feature_matrix(artifact_path(config, "features.csv"));
  s.labels = load_labels(artifact_path(config, "labels.csv"));
  s.plan = load_split(artifact_path(config, "split.csv"));
  s.stats = load_normalizer(artifact_path(config, "normalizer.csv"));
  return s;
}

}  // namespace

void cmd_synth(const PipelineConfig& config) {
  config.validate();
  if (config.data != DataSource::kSynthetic)
    fail(ErrorKind::kConfig, "synth needs data = synthetic");
  ensure_out_dir(config);
  const auto dataset = generate_synthetic(config.resolved_synth(), config.threads);
  write_file(artifact_path(config, "cells.csv"), cells_to_csv(dataset.universe));
  write_file(artifact_path(config, "hourly.csv"), hourly_to_csv(dataset.hourly));
  write_file(artifact_path(config, "crimes.csv"), crimes_to_csv(dataset.crimes));
  write_file(artifact_path(config, "profiles.csv"), profiles_to_csv(dataset.profiles));
  log::info("synth: " + std::to_string(dataset.universe.size()) + " cells, " +
            std::to_string(dataset.hourly.size()) + " hourly rows, " +
            std::to_string(dataset.crimes.size()) + " crimes");
}

void cmd_featurize(const PipelineConfig& config) {
  config.validate();
  ensure_out_dir(config);
  const auto in = inputs(config);
  for (const auto& p : {in.cells, in.hourly, in.profiles}) require_file(p, "synth");
  const auto universe = load_cells(in.cells);
  const auto hourly = load_hourly(in.hourly);
  report_rejections(in.hourly, hourly);
  const auto profiles = load_profiles(in.profiles);
  if (!profiles.rejections.empty())
    log::warn(in.profiles + ": " + std::to_string(profiles.rejections.size()) + " rows rejected");
  if (!profiles.imputed.empty())
    log::warn(in.profiles + ": " + std::to_string(profiles.imputed.size()) +
              " blank metrics imputed with the column median");
  const auto matrix =
      featurize(hourly.rows, universe, profiles.rows, {config.windows, config.threads});
  write_file(artifact_path(config, "features.csv"), feature_matrix_to_csv(matrix));
  log::info("featurize: " + std::to_string(matrix.rows()) + " cells x " +
            std::to_string(matrix.cols()) + " features");
}

void cmd_label(const PipelineConfig& config) {
  config.validate();
  ensure_out_dir(config);
  const auto in = inputs(config);
  for (const auto& p : {in.cells, in.crimes}) require_file(p, "synth");
  const auto universe = load_cells(in.cells);
  const auto crimes = load_crimes(in.crimes);
  report_rejections(in.crimes, crimes);
  const auto counts = count_crimes(crimes.rows, universe, config.month,
                                   CountOptions{config.include_zero_cells});
  const auto summary = summarize_counts(counts, config.kurtosis);
  const auto labels = median_split(counts);
  write_file(artifact_path(config, "labels.csv"), labels_to_csv(labels));
  write_file(artifact_path(config, "crime_summary.csv"), summary_to_csv(summary));
  write_file(artifact_path(config, "crime_summary.txt"), summary_to_text(summary));
  char line[128];
  std::snprintf(line, sizeof line, "label: %zu cells, median %g, %.2f%% high",
                labels.labels.size(), labels.split_threshold, 100.0 * labels.high_fraction());
  log::info(line);
}

void cmd_select(const PipelineConfig& config) {
  config.validate();
  ensure_out_dir(config);
  require_file(artifact_path(config, "features.csv"), "featurize");
  require_file(artifact_path(config, "labels.csv"), "label");
  const auto features = load_feature_matrix(artifact_path(config, "features.csv"));
  const auto labels = load_labels(artifact_path(config, "labels.csv"));
  const auto ids = labeled_cells(features, labels);
  const auto plan = split_cells(ids, config.split_fraction, config.resolved_split_seed());
  write_file(artifact_path(config, "split.csv"), split_to_csv(plan));

  const auto train_rows = features.select_rows(plan.train);
  const auto stats = fit_normalizer(train_rows);
  write_file(artifact_path(config, "normalizer.csv"), normalizer_to_csv(stats));
  const auto train = apply_normalizer(train_rows, stats);

  const auto ranking = rank_by_gini(train, labels, config.resolved_forest(), config.threads);
  write_file(artifact_path(config, "ranking.csv"), ranking_to_csv(ranking));
  const auto selected = select_top_k(ranking, config.top_k);
  write_file(artifact_path(config, "selected.txt"), join(selected, '\n') + "\n");

  const auto report = correlation_report(train.select_columns(selected), config.corr_threshold);
  write_file(artifact_path(config, "correlations.csv"), correlations_to_csv(report));
  log::info("select: " + std::to_string(plan.train.size()) + " training cells, kept " +
            std::to_string(selected.size()) + " of " + std::to_string(ranking.features.size()) +
            " features, " + std::to_string(report.pairs.size()) + " correlated pairs");
}

void cmd_train(const PipelineConfig& config) {
  config.validate();
  const auto s = load_selection_inputs(config);
  require_file(artifact_path(config, "ranking.csv"), "select");
  const auto ranking = load_ranking(artifact_path(config, "ranking.csv"));
  const auto train = apply_normalizer(s.features.select_rows(s.plan.train), s.stats);
  const auto params = config.resolved_forest();

  std::string oob_csv = "model,oob_error,evaluated,skipped\n";
  for (const auto& spec : model_specs(ranking, config.top_k)) {
    const auto matrix = train.select_columns(spec.features);
    const auto data = TrainingData::from(matrix, s.labels);
    const auto model = hotspot::train(data, spec.features, params, config.threads);
    save_model(model, model_file(config, spec.name));
    const auto oob = oob_error(model, data, config.threads);
    oob_csv += spec.name + ',' + format_double(oob.error) + ',' + std::to_string(oob.evaluated) +
               ',' + std::to_string(oob.skipped) + '\n';
    if (spec.name == "combined") {
      const auto table = importance_table(model, data, params.seed, config.threads);
      std::string csv =
          "feature,mean_decrease_gini,mean_decrease_accuracy,mean_decrease_accuracy_low,"
          "mean_decrease_accuracy_high\n";
      for (std::size_t f = 0; f < table.features.size(); ++f) {
        append_csv_field(csv, table.features[f]);
        for (double v : {table.mean_decrease_gini[f], table.mean_decrease_accuracy[f],
                         table.mean_decrease_accuracy_low[f],
                         table.mean_decrease_accuracy_high[f]}) {
          csv += ',';
          append_double(csv, v);
        }
        csv += '\n';
      }
      write_file(artifact_path(config, "importance.csv"), csv);
    }
    char line[160];
    std::snprintf(line, sizeof line, "train: %s model on %zu features, OOB error %.4f",
                  spec.name.c_str(), spec.features.size(), oob.error);
    log::info(line);
  }
  write_file(artifact_path(config, "oob.csv"), oob_csv);
}

void cmd_evaluate(const PipelineConfig& config) {
  config.validate();
  const auto s = load_selection_inputs(config);
  require_file(artifact_path(config, "ranking.csv"), "select");
  const auto ranking = load_ranking(artifact_path(config, "ranking.csv"));
  const auto ids = labeled_cells(s.features, s.labels);
  const auto all = apply_normalizer(s.features.select_rows(ids), s.stats);

  std::vector<EvaluationReport> reports;
  for (const auto& spec : model_specs(ranking, config.top_k)) {
    require_file(model_file(config, spec.name), "train");
    const auto model = load_model(model_file(config, spec.name));
    reports.push_back(evaluate(spec.name, model, all, s.labels, s.plan));

    if (spec.name != "combined") continue;
    // Training cells get their out-of-bag vote so every row is out-of-sample.
    const auto train_matrix = all.select_rows(s.plan.train).select_columns(model.feature_names);
    const auto votes = oob_votes(model, TrainingData::from(train_matrix, s.labels),
                                 config.threads);
    std::map<CellId, std::pair<double, bool>> scored;  // score, is_test
    for (std::size_t i = 0; i < train_matrix.rows(); ++i) {
      const double score =
          votes.total[i] ? static_cast<double>(votes.high[i]) / votes.total[i]
                         : model.predict(train_matrix.row(i)).score;
      scored[train_matrix.ids()[i]] = {score, false};
    }
    const auto test_matrix = all.select_rows(s.plan.test).select_columns(model.feature_names);
    for (std::size_t i = 0; i < test_matrix.rows(); ++i)
      scored[test_matrix.ids()[i]] = {model.predict(test_matrix.row(i)).score, true};
    std::string csv = "cell_id,split,crime_count,label,predicted,score\n";
    for (const auto& [id, entry] : scored) {
      const auto count = s.labels.counts.find(id);
      csv += std::to_string(to_u64(id)) + (entry.second ? ",test," : ",train,") +
             (count != s.labels.counts.end() ? std::to_string(count->second) : std::string()) +
             ',' + (s.labels.labels.at(id) == CrimeClass::kHigh ? "1" : "0") + ',' +
             (entry.first > 0.5 ? "1" : "0") + ',';
      append_double(csv, entry.first);
      csv += '\n';
    }
    write_file(artifact_path(config, "predictions.csv"), csv);
  }
  reports.push_back(
      majority_baseline(labels_of(s.labels, s.plan.train), labels_of(s.labels, s.plan.test)));

  write_file(artifact_path(config, "report.csv"), reports_to_csv(reports));
  write_file(artifact_path(config, "report.txt"), reports_to_text(reports));
  log::info("evaluate: " + std::to_string(s.plan.test.size()) + " test cells");
}

void cmd_export_map(const PipelineConfig& config) {
  config.validate();
  const auto in = inputs(config);
  require_file(in.cells, "synth");
  require_file(artifact_path(config, "predictions.csv"), "evaluate");
  const auto universe = load_cells(in.cells);
  const std::string path = artifact_path(config, "predictions.csv");
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row)) fail(ErrorKind::kSchema, path + ": empty file");
  const auto col = require_columns(row, {"cell_id", "label", "predicted", "score"}, path);
  std::vector<MapEntry> predicted, truth;
  while (reader.next(row)) {
    const auto where = path + ":" + std::to_string(reader.line());
    if (row.size() < 6) fail(ErrorKind::kSchema, where + ": short row");
    const auto id = parse_uint(row[col[0]]);
    const auto score = parse_double(row[col[3]]);
    if (!id || !score) fail(ErrorKind::kInput, where + ": malformed prediction row");
    const auto cls = [&](const std::string& v) {
      if (v != "0" && v != "1") fail(ErrorKind::kInput, where + ": class must be 0 or 1");
      return v == "1" ? CrimeClass::kHigh : CrimeClass::kLow;
    };
    const CrimeClass label = cls(row[col[1]]);
    predicted.push_back({CellId{*id}, cls(row[col[2]]), *score});
    truth.push_back({CellId{*id}, label, label == CrimeClass::kHigh ? 1.0 : 0.0});
  }
  write_file(artifact_path(config, "map_predicted.geojson"), export_geojson(predicted, universe));
  write_file(artifact_path(config, "map_truth.geojson"), export_geojson(truth, universe));
  log::info("export-map: " + std::to_string(predicted.size()) + " cells");
}

std::string cmd_report(const PipelineConfig& config) {
  require_file(artifact_path(config, "report.txt"), "evaluate");
  std::string out = "Crime counts, " + format_year_month(config.month) + "\n";
  const auto summary = artifact_path(config, "crime_summary.txt");
  if (std::filesystem::exists(summary)) out += read_file(summary) + "\n";
  out += "Models\n" + read_file(artifact_path(config, "report.txt"));
  const auto oob = artifact_path(config, "oob.csv");
  if (std::filesystem::exists(oob)) out += "\nOut-of-bag\n" + read_file(oob);
  const auto ranking = artifact_path(config, "ranking.csv");
  if (std::filesystem::exists(ranking)) {
    const auto r = load_ranking(ranking);
    const double total = r.total();
    out += "\nTop features by mean decrease in Gini\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(10, r.features.size()); ++i) {
      char line[256];
      std::snprintf(line, sizeof line, "%2zu  %-60s %6.2f%%\n", i + 1,
                    r.features[i].name.c_str(),
                    total > 0 ? 100.0 * r.features[i].mean_decrease_gini / total : 0.0);
      out += line;
    }
  }
  return out;
}

void cmd_run(const PipelineConfig& config) {
  config.validate();
  ensure_out_dir(config);
  write_file(artifact_path(config, "config.txt"), config.to_text());
  if (config.data == DataSource::kSynthetic) cmd_synth(config);
  cmd_featurize(config);
  cmd_label(config);
  cmd_select(config);
  cmd_train(config);
  cmd_evaluate(config);
  cmd_export_map(config);
}

}  // namespace hotspot
