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

#include <functional>
#include <string>

namespace hotspot::log {

enum class Level { kInfo = 0, kWarning = 1 };

using Sink = std::function<void(Level, const std::string&)>;

// Replaces the process-wide sink. An empty sink restores the default, which
// writes to stderr.
void set_sink(Sink sink);

void emit(Level level, const std::string& message);

inline void info(const std::string& message) { emit(Level::kInfo, message); }
inline void warn(const std::string& message) { emit(Level::kWarning, message); }

}  // namespace hotspot::log
