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

#include "primelearn/report.hpp"

#include <cstdio>
#include <fstream>

namespace primelearn::report {

std::string metric_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::ordered_json ExperimentReport::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = kSchemaVersion;
    j["version"] = kArtifactVersion;
    j["command"] = command;
    j["config"] = config;
    j["metrics"] = metrics;
    j["trials"] = trials;
    j["wall_clock_seconds"] = wall_clock_seconds;
    return j;
}

std::string ExperimentReport::metrics_block() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config"] = config;
    j["metrics"] = metrics;
    j["trials"] = trials;
    return j.dump(2);
}

void write_report(const ExperimentReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report: cannot open " + path);
    out << r.to_json().dump(2) << "\n";
    if (!out) throw std::runtime_error("write_report: write failed for " + path);
}

}  // namespace primelearn::report
