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

#include "hotspot/hotspot.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "hotspot/error.hpp"
#include "hotspot/evaluation.hpp"
#include "hotspot/feature_factory.hpp"
#include "hotspot/geo_index.hpp"
#include "hotspot/log.hpp"
#include "hotspot/pipeline.hpp"
#include "hotspot/random_forest.hpp"

struct hs_config {
  hotspot::PipelineConfig config;
};

struct hs_model {
  hotspot::ForestModel model;
};

struct hs_universe {
  hotspot::CellUniverse universe;
};

namespace {

thread_local std::string g_last_error;

hs_status status_of(hotspot::ErrorKind kind) {
  using hotspot::ErrorKind;
  switch (kind) {
    case ErrorKind::kInput: return HS_ERR_INPUT;
    case ErrorKind::kConfig: return HS_ERR_CONFIG;
    case ErrorKind::kSchema: return HS_ERR_SCHEMA;
    case ErrorKind::kInsufficientData: return HS_ERR_INSUFFICIENT_DATA;
    case ErrorKind::kUndefined: return HS_ERR_UNDEFINED;
    case ErrorKind::kEmptyWindow: return HS_ERR_EMPTY_WINDOW;
    case ErrorKind::kTraining: return HS_ERR_TRAINING;
    case ErrorKind::kCoverage: return HS_ERR_COVERAGE;
    case ErrorKind::kNaming: return HS_ERR_NAMING;
    case ErrorKind::kIo: return HS_ERR_IO;
  }
  return HS_ERR_INTERNAL;
}

hs_status set_error(hs_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
hs_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return HS_OK;
  } catch (const hotspot::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HS_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(HS_ERR_INTERNAL, "unknown error");
  }
}

hs_status null_argument(const char* name) {
  return set_error(HS_ERR_INVALID_ARGUMENT, std::string(name) + " must not be null");
}

hs_status copy_out(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf || cap < text.size() + 1)
    return set_error(HS_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(text.size() + 1) +
                                                  " bytes");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return HS_OK;
}

template <typename Command>
hs_status run_command(const hs_config* config, Command&& command) {
  if (!config) return null_argument("config");
  return guarded([&] { command(config->config); });
}

}  // namespace

extern "C" {

const char* hs_status_name(hs_status status) {
  switch (status) {
    case HS_OK: return "ok";
    case HS_ERR_INPUT: return "input";
    case HS_ERR_CONFIG: return "config";
    case HS_ERR_SCHEMA: return "schema";
    case HS_ERR_INSUFFICIENT_DATA: return "insufficient_data";
    case HS_ERR_UNDEFINED: return "undefined";
    case HS_ERR_EMPTY_WINDOW: return "empty_window";
    case HS_ERR_TRAINING: return "training";
    case HS_ERR_COVERAGE: return "coverage";
    case HS_ERR_NAMING: return "naming";
    case HS_ERR_IO: return "io";
    case HS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HS_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case HS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hs_last_error(void) { return g_last_error.c_str(); }

const char* hs_version(void) { return "1.0.0"; }

void hs_set_log_handler(hs_log_fn fn, void* user) {
  if (!fn) {
    hotspot::log::set_sink({});
    return;
  }
  hotspot::log::set_sink([fn, user](hotspot::log::Level level, const std::string& message) {
    fn(static_cast<int>(level), message.c_str(), user);
  });
}

hs_status hs_config_create(hs_config** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new hs_config(); });
}

void hs_config_destroy(hs_config* config) { delete config; }

hs_status hs_config_set(hs_config* config, const char* key, const char* value) {
  if (!config) return null_argument("config");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] { config->config.set(key, value); });
}

hs_status hs_config_load_file(hs_config* config, const char* path) {
  if (!config) return null_argument("config");
  if (!path) return null_argument("path");
  return guarded([&] { hotspot::load_config_file(config->config, path); });
}

hs_status hs_cmd_synth(const hs_config* c) { return run_command(c, hotspot::cmd_synth); }
hs_status hs_cmd_featurize(const hs_config* c) { return run_command(c, hotspot::cmd_featurize); }
hs_status hs_cmd_label(const hs_config* c) { return run_command(c, hotspot::cmd_label); }
hs_status hs_cmd_select(const hs_config* c) { return run_command(c, hotspot::cmd_select); }
hs_status hs_cmd_train(const hs_config* c) { return run_command(c, hotspot::cmd_train); }
hs_status hs_cmd_evaluate(const hs_config* c) { return run_command(c, hotspot::cmd_evaluate); }
hs_status hs_cmd_export_map(const hs_config* c) {
  return run_command(c, hotspot::cmd_export_map);
}
hs_status hs_cmd_run(const hs_config* c) { return run_command(c, hotspot::cmd_run); }

hs_status hs_cmd_report(const hs_config* config, char* buf, size_t cap, size_t* needed) {
  if (!config) return null_argument("config");
  std::string text;
  const hs_status s = guarded([&] { text = hotspot::cmd_report(config->config); });
  if (s != HS_OK) return s;
  return copy_out(text, buf, cap, needed);
}

hs_status hs_model_load(const char* path, hs_model** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new hs_model{hotspot::load_model(path)}; });
}

void hs_model_destroy(hs_model* model) { delete model; }

hs_status hs_model_feature_count(const hs_model* model, size_t* out) {
  if (!model) return null_argument("model");
  if (!out) return null_argument("out");
  *out = model->model.feature_names.size();
  return HS_OK;
}

hs_status hs_model_feature_name(const hs_model* model, size_t index, const char** out) {
  if (!model) return null_argument("model");
  if (!out) return null_argument("out");
  if (index >= model->model.feature_names.size())
    return set_error(HS_ERR_INVALID_ARGUMENT, "feature index out of range");
  *out = model->model.feature_names[index].c_str();
  return HS_OK;
}

hs_status hs_model_predict(const hs_model* model, const double* row, size_t n, int* cls,
                           double* score) {
  if (!model) return null_argument("model");
  if (!row && n > 0) return null_argument("row");
  return guarded([&] {
    const auto p = model->model.predict(std::span<const double>(row, n));
    if (cls) *cls = static_cast<int>(p.cls);
    if (score) *score = p.score;
  });
}

hs_status hs_universe_load(const char* cells_csv, hs_universe** out) {
  if (!cells_csv) return null_argument("cells_csv");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new hs_universe{hotspot::load_cells(cells_csv)}; });
}

void hs_universe_destroy(hs_universe* universe) { delete universe; }

hs_status hs_universe_nearest(const hs_universe* universe, double lat, double lon,
                              uint64_t* cell_id) {
  if (!universe) return null_argument("universe");
  if (!cell_id) return null_argument("cell_id");
  return guarded([&] {
    const hotspot::GeoPoint p{lat, lon};
    if (!p.valid()) hotspot::fail(hotspot::ErrorKind::kInput, "invalid coordinates");
    *cell_id = hotspot::to_u64(universe->universe.nearest_cell(p));
  });
}

hs_status hs_entropy(const double* weights, size_t n, double* out) {
  if (!weights && n > 0) return null_argument("weights");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = hotspot::shannon_entropy_empirical(std::span<const double>(weights, n));
  });
}

hs_status hs_auc(const double* scores, const uint8_t* truth, size_t n, double* out) {
  if ((!scores || !truth) && n > 0) return null_argument("scores/truth");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = hotspot::auc(std::span<const double>(scores, n), std::span<const uint8_t>(truth, n));
  });
}

hs_status hs_accuracy_ci(uint64_t correct, uint64_t n, double level, double* lo, double* hi) {
  if (!lo || !hi) return null_argument("lo/hi");
  return guarded([&] {
    const auto ci = hotspot::accuracy_ci(correct, n, level);
    *lo = ci.lo;
    *hi = ci.hi;
  });
}

hs_status hs_haversine(double lat1, double lon1, double lat2, double lon2, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = hotspot::haversine_distance({lat1, lon1}, {lat2, lon2}); });
}

hs_status hs_feature_name(const char* source, const char* granularity, const char* variable,
                          const char* inner, const char* outer, char* buf, size_t cap,
                          size_t* needed) {
  if (!source || !granularity || !variable || !inner)
    return null_argument("source/granularity/variable/inner");
  std::string name;
  const hs_status s = guarded([&] {
    name = hotspot::feature_name(source, granularity, variable, inner, outer ? outer : "");
  });
  if (s != HS_OK) return s;
  return copy_out(name, buf, cap, needed);
}

}  // extern "C"
