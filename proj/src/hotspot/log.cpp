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

#include "hotspot/log.hpp"

#include <cstdio>
#include <mutex>

#include "hotspot/error.hpp"

namespace hotspot {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput: return "input";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kInsufficientData: return "insufficient_data";
    case ErrorKind::kUndefined: return "undefined";
    case ErrorKind::kEmptyWindow: return "empty_window";
    case ErrorKind::kTraining: return "training";
    case ErrorKind::kCoverage: return "coverage";
    case ErrorKind::kNaming: return "naming";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

namespace log {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

Sink& sink_slot() {
  static Sink s;
  return s;
}

}  // namespace

void set_sink(Sink sink) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  sink_slot() = std::move(sink);
}

void emit(Level level, const std::string& message) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  if (sink_slot()) {
    sink_slot()(level, message);
    return;
  }
  std::fprintf(stderr, "[%s] %s\n", level == Level::kWarning ? "warn" : "info",
               message.c_str());
}

}  // namespace log
}  // namespace hotspot
