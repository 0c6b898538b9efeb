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

// Command-line front end over the hotspot C API.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hotspot/hotspot.h"

namespace {

// Exit status for a failed call: 10 + status code, so the category can be
// recovered from the shell.
int fail_with(hs_status status) {
  std::fprintf(stderr, "hotspot: error [%s]: %s\n", hs_status_name(status), hs_last_error());
  return 10 + static_cast<int>(status);
}

void log_to_stderr(int level, const char* message, void*) {
  std::fprintf(stderr, "%s%s\n", level ? "warning: " : "", message);
}

struct ConfigHandle {
  hs_config* ptr = nullptr;
  ~ConfigHandle() { hs_config_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crime hotspot classification from hourly footfall demographics"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out, seed, threads, top_k, trees, month;
  std::vector<std::string> overrides;
  bool quiet = false;
  app.add_option("--config", config_path, "key = value config file (default: $HOTSPOT_CONFIG)");
  app.add_option("--out", out, "artifact directory");
  app.add_option("--seed", seed, "seed for data generation, split and forest");
  app.add_option("--threads", threads, "worker threads, 0 = all cores");
  app.add_option("--top-k", top_k, "number of selected features");
  app.add_option("--trees", trees, "trees per forest");
  app.add_option("--month", month, "labeled month, YYYY-MM");
  app.add_option("--set", overrides, "extra key=value setting (repeatable)");
  app.add_flag("-q,--quiet", quiet, "suppress progress messages");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"synth", "generate a synthetic dataset"},
      {"featurize", "build the feature matrix"},
      {"label", "count crimes per cell and split at the median"},
      {"select", "split, normalize, rank and select features"},
      {"train", "train the compared forests"},
      {"evaluate", "score the models on the held-out cells"},
      {"export-map", "write GeoJSON maps of predictions and ground truth"},
      {"report", "print the stored report"},
      {"run", "run every stage"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other usage error exits 2.
    return app.exit(e) == 0 ? 0 : 2;
  }

  hs_set_log_handler(
      quiet ? [](int level, const char* m, void* u) { if (level) log_to_stderr(level, m, u); }
            : log_to_stderr,
      nullptr);

  ConfigHandle config;
  if (hs_status s = hs_config_create(&config.ptr); s != HS_OK) return fail_with(s);
  if (config_path.empty())
    if (const char* env = std::getenv("HOTSPOT_CONFIG"); env && *env) config_path = env;
  if (!config_path.empty())
    if (hs_status s = hs_config_load_file(config.ptr, config_path.c_str()); s != HS_OK)
      return fail_with(s);

  std::vector<std::pair<std::string, std::string>> settings;
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "hotspot: --set expects key=value, got '%s'\n", item.c_str());
      return 2;
    }
    settings.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  const std::pair<const char*, const std::optional<std::string>*> flags[] = {
      {"out", &out},     {"seed", &seed},   {"threads", &threads},
      {"top_k", &top_k}, {"trees", &trees}, {"month", &month}};
  for (const auto& [key, value] : flags)
    if (*value) settings.emplace_back(key, **value);
  for (const auto& [key, value] : settings)
    if (hs_status s = hs_config_set(config.ptr, key.c_str(), value.c_str()); s != HS_OK)
      return fail_with(s);

  const std::string command = app.get_subcommands().front()->get_name();
  hs_status status = HS_OK;
  if (command == "report") {
    size_t needed = 0;
    status = hs_cmd_report(config.ptr, nullptr, 0, &needed);
    if (status == HS_ERR_BUFFER_TOO_SMALL) {
      std::string text(needed, '\0');
      status = hs_cmd_report(config.ptr, text.data(), text.size(), nullptr);
      if (status == HS_OK) std::fputs(text.c_str(), stdout);
    }
  } else if (command == "synth") {
    status = hs_cmd_synth(config.ptr);
  } else if (command == "featurize") {
    status = hs_cmd_featurize(config.ptr);
  } else if (command == "label") {
    status = hs_cmd_label(config.ptr);
  } else if (command == "select") {
    status = hs_cmd_select(config.ptr);
  } else if (command == "train") {
    status = hs_cmd_train(config.ptr);
  } else if (command == "evaluate") {
    status = hs_cmd_evaluate(config.ptr);
  } else if (command == "export-map") {
    status = hs_cmd_export_map(config.ptr);
  } else {
    status = hs_cmd_run(config.ptr);
  }
  return status == HS_OK ? 0 : fail_with(status);
}
