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

#include "primelearn/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace primelearn::sampler {

namespace {

double binom_double(double n, u64 k) {
    double acc = 1.0;
    for (u64 i = 0; i < k; ++i) acc *= (n - static_cast<double>(i)) / static_cast<double>(i + 1);
    return acc;
}

std::vector<double> cumulative_of(const std::vector<double>& weights) {
    std::vector<double> cum(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cum[i] = acc;
    }
    return cum;
}

}  // namespace

void SamplerConfig::validate() const {
    if (K < 2) throw std::invalid_argument("SamplerConfig: K must be >= 2");
    if (m < compute_c_k(K))
        throw std::invalid_argument("SamplerConfig: m must be >= C_K for the class tables");
    if (max_rejections < 1 || max_class_retries < 1)
        throw std::invalid_argument("SamplerConfig: retry caps must be positive");
}

int compute_c_k(int K) {
    if (K < 1) throw std::invalid_argument("compute_c_k: K must be >= 1");
    for (int c = 2;; ++c) {
        const double bound = std::pow(2.0, c) * (0.37 * c - 1.0) / (static_cast<double>(c) * (c - 1));
        if (std::floor(bound) >= static_cast<double>(K)) return std::max(6, c);
    }
}

u64 StepTwoTables::class_count(int j) const {
    if (j < 2 || j > max_bits) throw std::invalid_argument("StepTwoTables: class out of range");
    if (j < c_k) return exact_counts[static_cast<std::size_t>(j)];
    return upper_counts[static_cast<std::size_t>(j)];
}

u64 StepTwoTables::exact_class_count(int j) const {
    if (j < 2 || j >= c_k) throw std::invalid_argument("StepTwoTables: exact count only below c_k");
    return exact_counts[static_cast<std::size_t>(j)];
}

StepTwoTables compute_step_two_tables(const SamplerConfig& cfg) {
    if (cfg.K < 2) throw std::invalid_argument("compute_step_two_tables: K must be >= 2");
    StepTwoTables t;
    t.c_k = compute_c_k(cfg.K);
    t.max_bits = cfg.m + cfg.K;  // sum constraint admits lengths up to m + omega
    t.exact_counts.assign(static_cast<std::size_t>(t.c_k), 0);
    for (int j = 2; j < t.c_k; ++j)
        t.exact_counts[static_cast<std::size_t>(j)] = numtheory::primes_in_bit_class(j).size();
    t.upper_counts.assign(static_cast<std::size_t>(t.max_bits) + 1, 0);
    for (int j = t.c_k; j <= t.max_bits; ++j) {
        const double bound =
            std::pow(2.0, j) * (0.76 * j - 1.26) / (static_cast<double>(j) * (j - 1));
        t.upper_counts[static_cast<std::size_t>(j)] = static_cast<u64>(std::ceil(bound));
    }
    return t;
}

std::vector<double> omega_weights(double log_m, int K) {
    if (K < 1) throw std::invalid_argument("omega_weights: K must be >= 1");
    std::vector<double> w(static_cast<std::size_t>(K));
    double value = 1.0;  // (log m)^(omega-1) / (omega-1)!
    for (int omega = 1; omega <= K; ++omega) {
        w[static_cast<std::size_t>(omega - 1)] = value;
        value *= log_m / static_cast<double>(omega);
    }
    return w;
}

int sample_omega(const SamplerConfig& cfg, SplitRng& rng) {
    if (cfg.m < 3) throw std::invalid_argument("sample_omega: m must be >= 3");
    const auto cum = cumulative_of(omega_weights(cfg.log_m(), cfg.K));
    return static_cast<int>(rng.pick_cumulative(cum)) + 1;
}

double bitlength_vector_weight(const std::vector<int>& lengths, const StepTwoTables& tables) {
    // A function of the per-class counts only; input order is irrelevant.
    std::map<int, u64> counts;
    for (int j : lengths) ++counts[j];
    double w = 1.0;
    for (const auto& [j, v] : counts) {
        if (j < tables.c_k && v > tables.exact_class_count(j)) return 0.0;
        w *= std::pow(1.0 / static_cast<double>(j), static_cast<double>(v)) *
             binom_double(static_cast<double>(tables.class_count(j)), v);
    }
    return w;
}

namespace {

void enumerate_lengths(const SamplerConfig& cfg, const StepTwoTables& tables, int slots,
                       int min_len, int budget, std::vector<int>& current,
                       std::vector<WeightedBitLengths>& out) {
    if (slots == 0) {
        const double w = bitlength_vector_weight(current, tables);
        if (w > 0.0) out.push_back({current, w});
        return;
    }
    // Remaining slots all need >= 2 bits of the sum budget.
    for (int j = min_len; j <= budget - 2 * (slots - 1); ++j) {
        current.push_back(j);
        enumerate_lengths(cfg, tables, slots - 1, j, budget - j, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<WeightedBitLengths> enumerate_bitlength_vectors(const SamplerConfig& cfg, int omega,
                                                            const StepTwoTables& tables) {
    if (omega < 1 || omega > cfg.K)
        throw std::invalid_argument("enumerate_bitlength_vectors: omega out of [1, K]");
    std::vector<WeightedBitLengths> out;
    std::vector<int> current;
    enumerate_lengths(cfg, tables, omega, 2, cfg.m + omega, current, out);
    if (out.empty())
        throw std::invalid_argument("enumerate_bitlength_vectors: no admissible vector (m too small)");
    return out;
}

std::vector<u128> sample_primes_for_lengths(const std::vector<int>& lengths,
                                            const SamplerConfig& cfg, SplitRng& rng) {
    std::vector<u128> out;
    std::size_t i = 0;
    while (i < lengths.size()) {
        const int j = lengths[i];
        std::size_t v = 0;
        while (i < lengths.size() && lengths[i] == j) {
            ++v;
            ++i;
        }
        // v distinct primes of the class; collisions are resampled, which is
        // equivalent to drawing a uniform v-subset.
        std::vector<u128> cls;
        int retries = 0;
        while (cls.size() < v) {
            u128 p = numtheory::random_prime(j, rng);
            if (std::find(cls.begin(), cls.end(), p) != cls.end()) {
                if (++retries > cfg.max_class_retries)
                    throw std::runtime_error("sample_primes_for_lengths: collision retry cap exceeded");
                continue;
            }
            cls.push_back(p);
        }
        out.insert(out.end(), cls.begin(), cls.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<u32> sample_multiplicities(const std::vector<u128>& primes, int m, SplitRng& rng) {
    const auto vectors = numtheory::enumerate_multiplicity_vectors(primes, m);
    if (vectors.empty()) throw std::invalid_argument("sample_multiplicities: empty support");
    return vectors[rng.below(vectors.size())];
}

TrainingSampler::TrainingSampler(SamplerConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    tables_ = compute_step_two_tables(cfg_);
    omega_cumulative_ = cumulative_of(omega_weights(cfg_.log_m(), cfg_.K));
    vectors_.resize(static_cast<std::size_t>(cfg_.K));
    vector_cumulative_.resize(static_cast<std::size_t>(cfg_.K));
    for (int omega = 1; omega <= cfg_.K; ++omega) {
        auto& slot = vectors_[static_cast<std::size_t>(omega - 1)];
        slot = enumerate_bitlength_vectors(cfg_, omega, tables_);
        std::vector<double> weights(slot.size());
        for (std::size_t i = 0; i < slot.size(); ++i) weights[i] = slot[i].weight;
        vector_cumulative_[static_cast<std::size_t>(omega - 1)] = cumulative_of(weights);
    }
}

std::optional<FactoredInteger> TrainingSampler::attempt_once(SplitRng& rng) {
    if (cfg_.m < 3) throw std::invalid_argument("TrainingSampler: m must be >= 3");
    const int omega = static_cast<int>(rng.pick_cumulative(omega_cumulative_)) + 1;
    const auto& slot = vectors_[static_cast<std::size_t>(omega - 1)];
    const auto& lengths = slot[rng.pick_cumulative(vector_cumulative_[static_cast<std::size_t>(omega - 1)])].lengths;
    const auto primes = sample_primes_for_lengths(lengths, cfg_, rng);

    // Rejection test, bit-exact: prod p_i > 2^m.
    const u128 limit = u128{1} << cfg_.m;
    u128 product = 1;
    for (u128 p : primes) product = mul_clamped(product, p, limit);
    if (product > limit) return std::nullopt;

    FactoredInteger fx;
    fx.primes = primes;
    fx.mults = sample_multiplicities(primes, cfg_.m, rng);
    fx.value = fx.recompute_value();
    return fx;
}

SampleRecord TrainingSampler::sample(SplitRng& rng) {
    SampleRecord rec;
    for (int tries = 0; tries <= cfg_.max_rejections; ++tries) {
        auto fx = attempt_once(rng);
        if (fx) {
            rec.x = std::move(*fx);
            return rec;
        }
        ++rec.rejections;
    }
    throw std::runtime_error("TrainingSampler: rejection cap exceeded (misconfigured m/K?)");
}

SampleRecord generate_factored_sample(const SamplerConfig& cfg, SplitRng& rng) {
    TrainingSampler s(cfg);
    return s.sample(rng);
}

namespace {

// Enumerates, for one bit-length vector, every choice of distinct primes per
// class whose running product stays within the acceptance bound, and feeds
// each complete prime set to `emit` with its subset probability.
struct ClassBlock {
    int bits = 0;
    std::vector<u64> primes;
    std::size_t take = 0;
};

void expand_subsets(const std::vector<ClassBlock>& blocks, std::size_t bi,
                    std::vector<u128>& chosen, double subset_prob, u128 limit,
                    const std::function<void(const std::vector<u128>&, double)>& emit) {
    if (bi == blocks.size()) {
        emit(chosen, subset_prob);
        return;
    }
    const auto& blk = blocks[bi];
    const std::size_t n = blk.primes.size();
    // Choose blk.take indices out of n, lexicographically.
    std::vector<std::size_t> idx(blk.take);
    const double inv_choices = 1.0 / binom_double(static_cast<double>(n), blk.take);
    std::function<void(std::size_t, std::size_t, u128)> rec = [&](std::size_t pos, std::size_t start,
                                                                  u128 product_so_far) {
        if (pos == blk.take) {
            expand_subsets(blocks, bi + 1, chosen, subset_prob * inv_choices, limit, emit);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            const u128 next = mul_clamped(product_so_far, blk.primes[i], limit);
            // Primes ascend within a class: once the running product exceeds
            // the acceptance bound every completion is a rejected draw, whose
            // mass falls out in the renormalization over accepted paths.
            if (next > limit) break;
            chosen.push_back(blk.primes[i]);
            rec(pos + 1, i + 1, next);
            chosen.pop_back();
        }
    };
    u128 before = 1;
    for (u128 p : chosen) before = mul_clamped(before, p, limit);
    rec(0, 0, before);
}

}  // namespace

ExactPmf exact_pmf(const SamplerConfig& cfg) {
    cfg.validate();
    if (cfg.m > 12 || cfg.K > 3)
        throw std::invalid_argument("exact_pmf: brute-force oracle limited to m <= 12, K <= 3");
    const auto tables = compute_step_two_tables(cfg);
    const auto w_omega = omega_weights(cfg.log_m(), cfg.K);
    const double w_omega_total = std::accumulate(w_omega.begin(), w_omega.end(), 0.0);
    const u128 limit = u128{1} << cfg.m;

    // Exact prime lists for every class the length vectors can touch.
    std::vector<std::vector<u64>> class_primes(static_cast<std::size_t>(tables.max_bits) + 1);
    for (int j = 2; j <= tables.max_bits; ++j) class_primes[static_cast<std::size_t>(j)] = numtheory::primes_in_bit_class(j);

    ExactPmf out;
    double accepted_mass = 0.0;
    for (int omega = 1; omega <= cfg.K; ++omega) {
        const double p_omega = w_omega[static_cast<std::size_t>(omega - 1)] / w_omega_total;
        const auto vectors = enumerate_bitlength_vectors(cfg, omega, tables);
        double w_vec_total = 0.0;
        for (const auto& v : vectors) w_vec_total += v.weight;
        for (const auto& v : vectors) {
            const double p_lengths = v.weight / w_vec_total;
            // Group the vector into per-class blocks.
            std::vector<ClassBlock> blocks;
            std::size_t i = 0;
            bool feasible = true;
            while (i < v.lengths.size()) {
                ClassBlock blk;
                blk.bits = v.lengths[i];
                while (i < v.lengths.size() && v.lengths[i] == blk.bits) {
                    ++blk.take;
                    ++i;
                }
                blk.primes = class_primes[static_cast<std::size_t>(blk.bits)];
                if (blk.primes.size() < blk.take) feasible = false;
                blocks.push_back(std::move(blk));
            }
            if (!feasible) continue;  // only possible above c_k, where counts are bounds
            std::vector<u128> chosen;
            expand_subsets(blocks, 0, chosen, 1.0, limit,
                           [&](const std::vector<u128>& primes, double subset_prob) {
                               const auto mult_vectors = numtheory::enumerate_multiplicity_vectors(primes, cfg.m);
                               if (mult_vectors.empty()) return;
                               const double p_path = p_omega * p_lengths * subset_prob /
                                                     static_cast<double>(mult_vectors.size());
                               for (const auto& mults : mult_vectors) {
                                   u128 x = 1;
                                   for (std::size_t t = 0; t < primes.size(); ++t)
                                       for (u32 r = 0; r < mults[t]; ++r) x *= primes[t];
                                   out.pmf[static_cast<u64>(x)] += p_path;
                                   accepted_mass += p_path;
                               }
                           });
        }
    }
    if (accepted_mass <= 0.0) throw std::runtime_error("exact_pmf: no accepted mass");
    for (auto& [x, p] : out.pmf) p /= accepted_mass;
    out.rejection_probability = 1.0 - accepted_mass;
    return out;
}

double total_variation(const std::map<u64, u64>& counts, u64 n_draws,
                       const std::map<u64, double>& pmf) {
    if (n_draws == 0) throw std::invalid_argument("total_variation: no draws");
    double tv = 0.0;
    for (const auto& [x, p] : pmf) {
        const auto it = counts.find(x);
        const double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n_draws);
        tv += std::abs(emp - p);
    }
    for (const auto& [x, c] : counts) {
        if (pmf.find(x) == pmf.end()) tv += static_cast<double>(c) / static_cast<double>(n_draws);
    }
    return tv / 2.0;
}

}  // namespace primelearn::sampler
