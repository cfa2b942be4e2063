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

#include <iosfwd>
#include <string>
#include <vector>

#include "primelearn/ints.hpp"
#include "primelearn/numtheory.hpp"
#include "primelearn/rng.hpp"
#include "primelearn/sampler.hpp"

namespace primelearn::oracles {

using numtheory::FunctionId;

enum class OracleMode { Exact, WorstCase, UniformNoise, Failing };

std::string to_string(OracleMode mode);
OracleMode oracle_mode_from_string(std::string_view name);

/// A function-value oracle under the additive-error contract
/// |estimate - f(x)| < c * b(x)^u, held with probability >= 1 - delta.
/// Queries are pure functions of (model, x).
struct OracleModel {
    FunctionId fn = FunctionId::F1;
    OracleMode mode = OracleMode::Exact;
    double c = 1.0;
    double u = 0.0;
    double delta = 0.0;  // out-of-contract probability, Failing mode only
    u64 seed = 0;

    void validate() const;
};

/// Oracle output. `exact` carries the full-precision decimal when the value
/// is an integer (Exact and WorstCase modes on integral functions), so labels
/// survive serialization bit-exactly.
struct Label {
    double value = 0.0;
    bool integral = false;
    std::string exact;

    std::string decimal() const;  // exact when integral, else 17 significant digits
};

/// The additive radius c * b(x)^u of the contract at input x.
double noise_bound(const OracleModel& o, u128 x);

/// True function value (exact integer view when integral).
Label true_label(const OracleModel& o, const numtheory::FactoredInteger& fx);

/// Estimate under the oracle's noise model. Deterministic in (o, x).
Label query(const OracleModel& o, u128 x);

struct TrainingMeta {
    int m = 0;
    int K = 0;
    FunctionId fn = FunctionId::F1;
    u64 seed = 0;
    u64 n = 0;
};

struct TrainingSample {
    u128 x = 0;
    Label y;
};

struct TrainingSet {
    std::vector<TrainingSample> pairs;
    TrainingMeta meta;

    std::string to_csv() const;
    std::string to_json() const;
    static TrainingSet from_csv(std::istream& in);
    static TrainingSet from_json(std::istream& in);
};

/// n sampler draws, each labeled by the oracle.
TrainingSet emit_training_set(const sampler::SamplerConfig& cfg, const OracleModel& o, u64 n,
                              SplitRng& rng);

/// 17-significant-digit rendering used wherever labels are real-valued.
std::string format_real(double v);

}  // namespace primelearn::oracles
