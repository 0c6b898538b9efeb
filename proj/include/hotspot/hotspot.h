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

#ifndef HOTSPOT_HOTSPOT_H_
#define HOTSPOT_HOTSPOT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(HOTSPOT_BUILDING)
#define HS_API __declspec(dllexport)
#else
#define HS_API __declspec(dllimport)
#endif
#else
#define HS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns HS_OK or an error category. The message of the most
 * recent failure on the calling thread is available from hs_last_error(). */
typedef enum hs_status {
  HS_OK = 0,
  HS_ERR_INPUT = 1,
  HS_ERR_CONFIG = 2,
  HS_ERR_SCHEMA = 3,
  HS_ERR_INSUFFICIENT_DATA = 4,
  HS_ERR_UNDEFINED = 5,
  HS_ERR_EMPTY_WINDOW = 6,
  HS_ERR_TRAINING = 7,
  HS_ERR_COVERAGE = 8,
  HS_ERR_NAMING = 9,
  HS_ERR_IO = 10,
  HS_ERR_INVALID_ARGUMENT = 11, /* null pointer or bad enum */
  HS_ERR_BUFFER_TOO_SMALL = 12,
  HS_ERR_INTERNAL = 13
} hs_status;

/* Stable lowercase category name, e.g. "schema". */
HS_API const char* hs_status_name(hs_status status);
HS_API const char* hs_last_error(void);
HS_API const char* hs_version(void);

/* Log messages from the library go to stderr unless a handler is installed.
 * level: 0 = info, 1 = warning. Pass NULL to restore the default. */
typedef void (*hs_log_fn)(int level, const char* message, void* user);
HS_API void hs_set_log_handler(hs_log_fn fn, void* user);

/* Pipeline configuration; see README for the key list. */
typedef struct hs_config hs_config;
HS_API hs_status hs_config_create(hs_config** out);
HS_API void hs_config_destroy(hs_config* config);
HS_API hs_status hs_config_set(hs_config* config, const char* key, const char* value);
HS_API hs_status hs_config_load_file(hs_config* config, const char* path);

/* Pipeline stages. Each reads and writes artifacts in the configured
 * output directory. */
HS_API hs_status hs_cmd_synth(const hs_config* config);
HS_API hs_status hs_cmd_featurize(const hs_config* config);
HS_API hs_status hs_cmd_label(const hs_config* config);
HS_API hs_status hs_cmd_select(const hs_config* config);
HS_API hs_status hs_cmd_train(const hs_config* config);
HS_API hs_status hs_cmd_evaluate(const hs_config* config);
HS_API hs_status hs_cmd_export_map(const hs_config* config);
HS_API hs_status hs_cmd_run(const hs_config* config);

/* String outputs use a caller buffer. *needed (if non-null) receives the
 * length including the terminator; HS_ERR_BUFFER_TOO_SMALL when cap is less. */
HS_API hs_status hs_cmd_report(const hs_config* config, char* buf, size_t cap, size_t* needed);

typedef struct hs_model hs_model;
HS_API hs_status hs_model_load(const char* path, hs_model** out);
HS_API void hs_model_destroy(hs_model* model);
HS_API hs_status hs_model_feature_count(const hs_model* model, size_t* out);
/* The returned pointer lives as long as the model. */
HS_API hs_status hs_model_feature_name(const hs_model* model, size_t index, const char** out);
/* cls: 0 = low, 1 = high; score: fraction of trees voting high. */
HS_API hs_status hs_model_predict(const hs_model* model, const double* row, size_t n, int* cls,
                                  double* score);

typedef struct hs_universe hs_universe;
HS_API hs_status hs_universe_load(const char* cells_csv, hs_universe** out);
HS_API void hs_universe_destroy(hs_universe* universe);
HS_API hs_status hs_universe_nearest(const hs_universe* universe, double lat, double lon,
                                     uint64_t* cell_id);

HS_API hs_status hs_entropy(const double* weights, size_t n, double* out);
HS_API hs_status hs_auc(const double* scores, const uint8_t* truth, size_t n, double* out);
HS_API hs_status hs_accuracy_ci(uint64_t correct, uint64_t n, double level, double* lo,
                                double* hi);
/* Meters. */
HS_API hs_status hs_haversine(double lat1, double lon1, double lat2, double lon2, double* out);
/* outer may be NULL or "" for monthly features. */
HS_API hs_status hs_feature_name(const char* source, const char* granularity,
                                 const char* variable, const char* inner, const char* outer,
                                 char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* HOTSPOT_HOTSPOT_H_ */
