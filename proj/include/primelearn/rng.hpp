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

#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "primelearn/ints.hpp"

namespace primelearn {

/// splitmix64 finalizer; bijective, good avalanche.
inline u64 mix_u64(u64 z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic derivation of named sub-stream seeds from one base seed.
/// All randomness in the artifact flows from a single --seed through this.
inline u64 derive_seed(u64 base, std::string_view tag, u64 index = 0) {
    u64 h = 0xcbf29ce484222325ULL ^ mix_u64(base);
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix_u64(h ^ mix_u64(index + 0x517cc1b727220a95ULL));
}

/// mt19937_64 with bias-free helpers. The bounded draws are hand-rolled
/// (std::uniform_int_distribution is not pinned across standard libraries,
/// and reports must be byte-identical for identical seeds).
class SplitRng {
public:
    explicit SplitRng(u64 seed) : gen_(seed) {}

    u64 next() { return gen_(); }

    /// Uniform in [0, n), rejection-sampled.
    u64 below(u64 n) {
        if (n == 0) throw std::invalid_argument("SplitRng::below: n == 0");
        const u64 limit = ~u64{0} - (~u64{0} % n);
        u64 x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform in [lo, hi], inclusive.
    u64 range(u64 lo, u64 hi) {
        if (lo > hi) throw std::invalid_argument("SplitRng::range: lo > hi");
        if (lo == 0 && hi == ~u64{0}) return gen_();
        return lo + below(hi - lo + 1);
    }

    /// Uniform real in [0, 1), 53 random bits.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool coin() { return (gen_() >> 63) != 0; }

    /// Index draw by inversion of a cumulative weight table (last entry is the
    /// total mass; weights nonnegative, total > 0).
    std::size_t pick_cumulative(const std::vector<double>& cumulative) {
        if (cumulative.empty() || cumulative.back() <= 0.0)
            throw std::invalid_argument("SplitRng::pick_cumulative: empty or zero-mass table");
        const double r = unit() * cumulative.back();
        std::size_t lo = 0, hi = cumulative.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cumulative[mid] <= r)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace primelearn
