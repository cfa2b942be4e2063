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

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "primelearn/ints.hpp"
#include "primelearn/numtheory.hpp"
#include "primelearn/rng.hpp"

namespace primelearn::sampler {

using numtheory::FactoredInteger;

/// Parameters of the near-uniform training distribution over
/// {x : omega(x) <= K, b(x) <= m}.
struct SamplerConfig {
    int m = 8;
    int K = 2;
    u64 seed = 0;
    int max_rejections = 1000;
    int max_class_retries = 1000;
    /// Test hook: fixes the value used for ln(m) in the omega weights.
    std::optional<double> log_m_override;

    double log_m() const { return log_m_override ? *log_m_override : std::log(static_cast<double>(m)); }
    void validate() const;
};

/// Bit-class prime-count tables for the bit-length-vector weights: exact
/// counts below the threshold c_k, the ceil(2^j(0.76j-1.26)/(j(j-1))) upper
/// bound at or above it.
struct StepTwoTables {
    int c_k = 0;
    int max_bits = 0;
    std::vector<u64> exact_counts;  // indexed by j, valid for 2 <= j < c_k
    std::vector<u64> upper_counts;  // indexed by j, valid for c_k <= j <= max_bits

    u64 class_count(int j) const;       // count used in weights
    u64 exact_class_count(int j) const; // admissibility cap, j < c_k only
};

/// Smallest threshold such that every bit class at or above it is guaranteed
/// to hold at least K primes: max{6, c_K}.
int compute_c_k(int K);

StepTwoTables compute_step_two_tables(const SamplerConfig& cfg);

/// Unnormalized weights (log m)^(w-1)/(w-1)! for w = 1..K.
std::vector<double> omega_weights(double log_m, int K);

/// Draws the distinct-prime count in [1, K].
int sample_omega(const SamplerConfig& cfg, SplitRng& rng);

/// Non-decreasing prime bit lengths with its sampling weight.
struct WeightedBitLengths {
    std::vector<int> lengths;  // l_1 <= ... <= l_omega, each >= 2
    double weight = 0.0;
};

/// Weight of one admissible vector: prod over classes of
/// (1/j^v) * binom(class_count(j), v); 0 if some class is over-subscribed.
double bitlength_vector_weight(const std::vector<int>& lengths, const StepTwoTables& tables);

/// All admissible vectors for the given omega (sum of lengths <= m + omega),
/// in lexicographic order, each with its unnormalized weight.
std::vector<WeightedBitLengths> enumerate_bitlength_vectors(const SamplerConfig& cfg, int omega,
                                                            const StepTwoTables& tables);

/// Distinct primes, one uniform draw per entry of `lengths` within its bit
/// class (resample on collision); ascending result.
std::vector<u128> sample_primes_for_lengths(const std::vector<int>& lengths,
                                            const SamplerConfig& cfg, SplitRng& rng);

/// Uniform draw over {r >= 1 : prod p_i^r_i <= 2^m}. Throws on empty support.
std::vector<u32> sample_multiplicities(const std::vector<u128>& primes, int m, SplitRng& rng);

struct SampleRecord {
    FactoredInteger x;
    int rejections = 0;  // rejected prime draws before this sample
};

/// One accepted draw from the three-step pipeline with its rejection count.
SampleRecord generate_factored_sample(const SamplerConfig& cfg, SplitRng& rng);

/// Caches the omega weights and per-omega bit-length tables so that repeated
/// draws cost only the table lookups, prime draws and the multiplicity
/// enumeration. Tables are immutable after construction.
class TrainingSampler {
public:
    explicit TrainingSampler(SamplerConfig cfg);

    SampleRecord sample(SplitRng& rng);
    /// A single pipeline attempt; nullopt when the prime draw was rejected.
    std::optional<FactoredInteger> attempt_once(SplitRng& rng);

    const SamplerConfig& config() const { return cfg_; }
    const StepTwoTables& tables() const { return tables_; }

private:
    SamplerConfig cfg_;
    StepTwoTables tables_;
    std::vector<double> omega_cumulative_;
    // per omega (1-based -> index omega-1): vectors plus cumulative weights
    std::vector<std::vector<WeightedBitLengths>> vectors_;
    std::vector<std::vector<double>> vector_cumulative_;
};

struct ExactPmf {
    std::map<u64, double> pmf;      // conditional on acceptance
    double rejection_probability = 0.0;
};

/// Brute-force expansion of the full pipeline for tiny scales (m <= 12,
/// K <= 3): exact conditional-on-acceptance mass per value.
ExactPmf exact_pmf(const SamplerConfig& cfg);

/// Total variation distance between an empirical histogram and an exact pmf.
double total_variation(const std::map<u64, u64>& counts, u64 n_draws,
                       const std::map<u64, double>& pmf);

}  // namespace primelearn::sampler
