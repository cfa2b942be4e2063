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
#include <vector>

#include "primelearn/report.hpp"

namespace primelearn::cli {

/// Exit codes: 0 ok, 1 bad flags or I/O, 2 precondition violation,
/// 3 a documented acceptance threshold was violated.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadFlags = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitThreshold = 3;

struct CommandResult {
    int exit_code = kExitOk;
    report::ExperimentReport report;
    std::string error;  // set when exit_code != 0 and no report was produced
};

/// Runs one subcommand (gen-dataset, factor-sweep, verify-sampler,
/// verify-lemma3, qlearn-demo, estimator-calib). argv excludes the program
/// name. Never throws; failures map to exit codes.
CommandResult run_command(const std::vector<std::string>& argv);

}  // namespace primelearn::cli
