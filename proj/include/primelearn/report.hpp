// Copyright 2026 The primelearn developers.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "json.hpp"

namespace primelearn::report {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Machine-readable run record. Everything under `metrics` and `trials` is a
/// deterministic function of the config (wall clock lives outside them), so
/// identical flags and seed reproduce those blocks byte for byte.
struct ExperimentReport {
    std::string command;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    nlohmann::ordered_json trials = nlohmann::ordered_json::array();
    double wall_clock_seconds = 0.0;

    nlohmann::ordered_json to_json() const;
    /// The reproducible part only, serialized.
    std::string metrics_block() const;
};

/// Real-valued metrics are stored as 17-significant-digit decimal strings.
std::string metric_real(double v);

/// Serializes to `path`. Throws std::runtime_error naming the path on I/O
/// failure.
void write_report(const ExperimentReport& r, const std::string& path);

}  // namespace primelearn::report
