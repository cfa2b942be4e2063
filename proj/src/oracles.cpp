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

#include "primelearn/oracles.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace primelearn::oracles {

namespace {

u64 hash_input(u64 seed, u128 x) {
    return mix_u64(mix_u64(seed ^ 0x6f72636cULL) ^ mix_u64(static_cast<u64>(x)) ^
                   mix_u64(static_cast<u64>(x >> 64) + 1));
}

// f + signed integer offset, rendered exactly.
Label integral_label(u128 f, i128 offset) {
    Label out;
    out.integral = true;
    i128 shifted = static_cast<i128>(f) + offset;  // desk scale keeps f < 2^126
    out.exact = i128_to_string(shifted);
    out.value = static_cast<double>(shifted);
    return out;
}

}  // namespace

std::string to_string(OracleMode mode) {
    switch (mode) {
        case OracleMode::Exact: return "exact";
        case OracleMode::WorstCase: return "worst-case";
        case OracleMode::UniformNoise: return "uniform";
        case OracleMode::Failing: return "failing";
    }
    throw std::logic_error("unreachable");
}

OracleMode oracle_mode_from_string(std::string_view name) {
    if (name == "exact") return OracleMode::Exact;
    if (name == "worst-case") return OracleMode::WorstCase;
    if (name == "uniform") return OracleMode::UniformNoise;
    if (name == "failing") return OracleMode::Failing;
    throw std::invalid_argument("unknown oracle mode: " + std::string(name));
}

void OracleModel::validate() const {
    if (c <= 0.0) throw std::invalid_argument("OracleModel: c must be positive");
    if (u < 0.0) throw std::invalid_argument("OracleModel: u must be nonnegative");
    if (delta < 0.0 || delta >= 0.5) throw std::invalid_argument("OracleModel: delta must be in [0, 1/2)");
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string Label::decimal() const { return integral ? exact : format_real(value); }

double noise_bound(const OracleModel& o, u128 x) {
    return o.c * std::pow(static_cast<double>(ceil_log2(x)), o.u);
}

Label true_label(const OracleModel& o, const numtheory::FactoredInteger& fx) {
    const auto v = numtheory::eval_f(o.fn, fx);
    Label out;
    if (v.integral()) {
        out.integral = true;
        out.exact = v.mantissa.str();
        out.value = v.mantissa.convert_to<double>();
    } else {
        out.integral = false;
        out.value = v.to_double();
    }
    return out;
}

Label query(const OracleModel& o, u128 x) {
    o.validate();
    if (x < 2) throw std::invalid_argument("query: x must be >= 2");
    const auto fx = numtheory::factorize(x);
    const Label truth = true_label(o, fx);
    switch (o.mode) {
        case OracleMode::Exact:
            return truth;
        case OracleMode::WorstCase: {
            // The hardest estimate the contract allows: full-radius offset
            // with a sign that alternates over inputs.
            const i128 off = static_cast<i128>(std::floor(noise_bound(o, x)));
            const i128 sign = (hash_input(o.seed, x) & 1) ? 1 : -1;
            if (truth.integral) {
                // exact string holds the untruncated integer estimate
                return integral_label(numtheory::BigInt(truth.exact).convert_to<u128>(), sign * off);
            }
            Label out;
            out.value = truth.value + static_cast<double>(sign * off);
            return out;
        }
        case OracleMode::UniformNoise: {
            SplitRng rng(hash_input(o.seed, x));
            Label out;
            out.value = truth.value + (2.0 * rng.unit() - 1.0) * noise_bound(o, x);
            return out;
        }
        case OracleMode::Failing: {
            SplitRng rng(hash_input(o.seed, x));
            const bool garbage = rng.unit() < o.delta;
            Label out;
            if (garbage) {
                out.value = rng.unit() * 2.0 * truth.value;
            } else {
                out.value = truth.value + (2.0 * rng.unit() - 1.0) * noise_bound(o, x);
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

TrainingSet emit_training_set(const sampler::SamplerConfig& cfg, const OracleModel& o, u64 n,
                              SplitRng& rng) {
    if (n < 1) throw std::invalid_argument("emit_training_set: n must be >= 1");
    o.validate();
    sampler::TrainingSampler s(cfg);
    TrainingSet out;
    out.meta = {cfg.m, cfg.K, o.fn, cfg.seed, n};
    out.pairs.reserve(n);
    for (u64 i = 0; i < n; ++i) {
        auto rec = s.sample(rng);
        TrainingSample pair;
        pair.x = rec.x.value;
        pair.y = o.mode == OracleMode::Exact ? true_label(o, rec.x) : query(o, rec.x.value);
        out.pairs.push_back(std::move(pair));
    }
    return out;
}

std::string TrainingSet::to_csv() const {
    std::string out = "x,y\n";
    for (const auto& p : pairs) {
        out += u128_to_string(p.x);
        out += ',';
        out += p.y.decimal();
        out += '\n';
    }
    return out;
}

std::string TrainingSet::to_json() const {
    nlohmann::ordered_json j;
    j["meta"] = {{"m", meta.m},
                 {"K", meta.K},
                 {"fn", numtheory::to_string(meta.fn)},
                 {"seed", meta.seed},
                 {"n", meta.n}};
    auto& pairs_json = j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& p : pairs) {
        pairs_json.push_back({u128_to_string(p.x), p.y.decimal()});
    }
    return j.dump(2) + "\n";
}

namespace {

Label label_from_decimal(const std::string& text) {
    Label y;
    if (text.find_first_of(".eE") == std::string::npos &&
        text.find_first_not_of("-0123456789") == std::string::npos) {
        y.integral = true;
        y.exact = text;
        y.value = numtheory::BigInt(text).convert_to<double>();
    } else {
        y.value = std::stod(text);
    }
    return y;
}

}  // namespace

TrainingSet TrainingSet::from_csv(std::istream& in) {
    TrainingSet out;
    std::string line;
    if (!std::getline(in, line) || line != "x,y")
        throw std::runtime_error("TrainingSet::from_csv: missing x,y header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("TrainingSet::from_csv: bad row");
        TrainingSample pair;
        pair.x = u128_from_string(line.substr(0, comma));
        pair.y = label_from_decimal(line.substr(comma + 1));
        out.pairs.push_back(std::move(pair));
    }
    out.meta.n = out.pairs.size();
    return out;
}

TrainingSet TrainingSet::from_json(std::istream& in) {
    const auto j = nlohmann::json::parse(in);
    TrainingSet out;
    out.meta.m = j.at("meta").at("m").get<int>();
    out.meta.K = j.at("meta").at("K").get<int>();
    out.meta.fn = numtheory::function_id_from_string(j.at("meta").at("fn").get<std::string>());
    out.meta.seed = j.at("meta").at("seed").get<u64>();
    out.meta.n = j.at("meta").at("n").get<u64>();
    for (const auto& row : j.at("pairs")) {
        TrainingSample pair;
        pair.x = u128_from_string(row.at(0).get<std::string>());
        pair.y = label_from_decimal(row.at(1).get<std::string>());
        out.pairs.push_back(std::move(pair));
    }
    return out;
}

}  // namespace primelearn::oracles
