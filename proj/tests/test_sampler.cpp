#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "primelearn/sampler.hpp"

using namespace primelearn;
using namespace primelearn::sampler;

namespace {

SamplerConfig make_cfg(int m, int K, u64 seed = 0) {
    SamplerConfig cfg;
    cfg.m = m;
    cfg.K = K;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("class threshold values") {
    CHECK(compute_c_k(2) == 6);
    CHECK(compute_c_k(3) == 7);
    const auto tables = compute_step_two_tables(make_cfg(10, 2));
    CHECK(tables.c_k == 6);
    CHECK(tables.exact_counts[2] == 2);  // {2, 3}
    CHECK(tables.exact_counts[3] == 2);  // {5, 7}
    CHECK(tables.exact_counts[4] == 2);  // {11, 13}
    CHECK(tables.exact_counts[5] == 5);  // {17, 19, 23, 29, 31}
    // Above the threshold the table follows the pinned closed form; it only
    // has to keep every binomial well defined (count >= K), not to dominate
    // the true class sizes.
    CHECK(tables.upper_counts[6] == 8);   // ceil(64 * 3.30 / 30)
    CHECK(tables.upper_counts[7] == 13);  // ceil(128 * 4.06 / 42)
    for (int j = tables.c_k; j <= tables.max_bits; ++j) CHECK(tables.class_count(j) >= 2);
}

TEST_CASE("omega weights and draw probabilities") {
    auto w = omega_weights(1.0, 2);  // log m pinned to 1
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(1.0));

    w = omega_weights(std::log(16.0), 2);
    CHECK(w[1] / (w[0] + w[1]) == doctest::Approx(0.7349).epsilon(1e-3));

    auto cfg = make_cfg(16, 2, 3);
    cfg.log_m_override = 1.0;
    SplitRng rng(42);
    int twos = 0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i)
        if (sample_omega(cfg, rng) == 2) ++twos;
    CHECK(std::abs(twos / static_cast<double>(draws) - 0.5) < 0.02);

    // Single category: always 1.
    auto single = make_cfg(16, 1, 1);
    SplitRng rng1(8);
    for (int i = 0; i < 50; ++i) CHECK(sample_omega(single, rng1) == 1);
}

TEST_CASE("bit-length vector enumeration, single prime") {
    const auto cfg = make_cfg(6, 2);
    const auto tables = compute_step_two_tables(cfg);
    const auto vecs = enumerate_bitlength_vectors(cfg, 1, tables);
    std::vector<int> lens;
    for (const auto& v : vecs) {
        REQUIRE(v.lengths.size() == 1);
        lens.push_back(v.lengths[0]);
        const double count = static_cast<double>(tables.class_count(v.lengths[0]));
        CHECK(v.weight == doctest::Approx(count / v.lengths[0]));
    }
    CHECK(lens == std::vector<int>{2, 3, 4, 5, 6, 7});  // sum bound is m + omega
}

TEST_CASE("bit-length vector weights") {
    const auto cfg = make_cfg(8, 2);
    const auto tables = compute_step_two_tables(cfg);
    CHECK(bitlength_vector_weight({3, 3}, tables) == doctest::Approx(1.0 / 9.0));
    CHECK(bitlength_vector_weight({2, 2}, tables) == doctest::Approx(1.0 / 4.0));
    // Weight is a function of the value counts only, not of input order.
    SplitRng rng(9);
    for (int i = 0; i < 100; ++i) {
        std::vector<int> l = {2 + static_cast<int>(rng.below(6)), 2 + static_cast<int>(rng.below(6)),
                              2 + static_cast<int>(rng.below(6))};
        std::sort(l.begin(), l.end());
        auto shuffled = l;
        for (std::size_t s = shuffled.size(); s > 1; --s)
            std::swap(shuffled[s - 1], shuffled[rng.below(s)]);
        CHECK(bitlength_vector_weight(l, tables) ==
              doctest::Approx(bitlength_vector_weight(shuffled, tables)));
    }
}

TEST_CASE("prime draws per bit-length vector") {
    const auto cfg = make_cfg(8, 2);
    SplitRng rng(31);
    // Forced: the only two 2-bit primes.
    for (int i = 0; i < 20; ++i) {
        const auto ps = sample_primes_for_lengths({2, 2}, cfg, rng);
        CHECK(ps == std::vector<u128>{2, 3});
    }
    // 3-bit class: 5 or 7, roughly balanced.
    std::map<u64, int> freq;
    for (int i = 0; i < 4000; ++i) ++freq[static_cast<u64>(sample_primes_for_lengths({3}, cfg, rng)[0])];
    CHECK(freq[5] > 1700);
    CHECK(freq[7] > 1700);
    // Mixed classes: four equally likely sets.
    std::map<std::pair<u64, u64>, int> sets;
    for (int i = 0; i < 8000; ++i) {
        const auto ps = sample_primes_for_lengths({2, 4}, cfg, rng);
        ++sets[{static_cast<u64>(ps[0]), static_cast<u64>(ps[1])}];
    }
    CHECK(sets.size() == 4);
    for (const auto& [key, count] : sets) CHECK(count > 1600);
}

TEST_CASE("multiplicity draws") {
    SplitRng rng(13);
    std::map<std::pair<u32, u32>, int> freq;
    for (int i = 0; i < 4000; ++i) {
        const auto r = sample_multiplicities({2, 3}, 4, rng);
        ++freq[{r[0], r[1]}];
    }
    REQUIRE(freq.size() == 2);  // only 6 and 12 fit under 2^4
    CHECK(freq[{1, 1}] > 1700);
    CHECK(freq[{2, 1}] > 1700);

    std::set<u32> exponents;
    for (int i = 0; i < 200; ++i) exponents.insert(sample_multiplicities({2}, 3, rng)[0]);
    CHECK(exponents == std::set<u32>{1, 2, 3});

    for (int i = 0; i < 10; ++i)
        CHECK(sample_multiplicities({3, 5}, 4, rng) == std::vector<u32>{1, 1});
    CHECK_THROWS_AS(sample_multiplicities({3, 5}, 3, rng), std::invalid_argument);
}

TEST_CASE("generated samples satisfy the domain bounds") {
    const auto cfg = make_cfg(8, 2, 77);
    TrainingSampler s(cfg);
    SplitRng rng(derive_seed(cfg.seed, "draws"));
    bool saw_twelve = false;
    for (int i = 0; i < 5000; ++i) {
        const auto rec = s.sample(rng);
        rec.x.validate();
        CHECK(rec.x.value <= 256);
        CHECK(rec.x.omega() >= 1);
        CHECK(rec.x.omega() <= 2);
        // Accepted draws stay inside both the bit-sum and the product budget.
        int bit_sum = 0;
        for (u128 p : rec.x.primes) bit_sum += bit_length(p);
        CHECK(bit_sum <= cfg.m + rec.x.omega());
        if (rec.x.value == 12) saw_twelve = true;
    }
    CHECK(saw_twelve);
}

TEST_CASE("exact pmf normalizes, covers the support, and matches sampling") {
    const auto cfg = make_cfg(8, 2, 5);
    const auto exact = exact_pmf(cfg);

    double total = 0.0;
    for (const auto& [x, p] : exact.pmf) {
        CHECK(p > 0.0);
        total += p;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);

    const auto omega_counts = numtheory::distinct_factor_counts(256);
    for (u64 x = 2; x <= 256; ++x) {
        const bool in_domain = omega_counts[x] >= 1 && omega_counts[x] <= 2;
        CHECK(in_domain == (exact.pmf.find(x) != exact.pmf.end()));
    }
    CHECK(exact.pmf.find(12)->second > 0.0);

    // Monte Carlo agreement at a light scale; the acceptance suite runs the
    // full 2e5-draw version.
    TrainingSampler s(cfg);
    SplitRng rng(derive_seed(cfg.seed, "tv"));
    std::map<u64, u64> counts;
    const u64 draws = 40000;
    for (u64 i = 0; i < draws; ++i) ++counts[static_cast<u64>(s.sample(rng).x.value)];
    CHECK(total_variation(counts, draws, exact.pmf) < 0.05);
}

TEST_CASE("pmf of the sampled distribution stays positive against uniform") {
    const auto cfg = make_cfg(10, 2, 1);
    const auto exact = exact_pmf(cfg);
    const u64 support = exact.pmf.size();
    double min_ratio = 1e300;
    for (const auto& [x, p] : exact.pmf) min_ratio = std::min(min_ratio, p * static_cast<double>(support));
    CHECK(min_ratio > 0.0);
}

TEST_CASE("rejection rate stays under the constant bound") {
    const auto cfg = make_cfg(24, 2, 123);
    TrainingSampler s(cfg);
    SplitRng rng(derive_seed(cfg.seed, "reject"));
    int attempts = 10000, rejected = 0;
    for (int i = 0; i < attempts; ++i)
        if (!s.attempt_once(rng)) ++rejected;
    const double rate = rejected / static_cast<double>(attempts);
    CHECK(rate <= 1.0 - 1.0 / 9.0 + 0.05);
}

TEST_CASE("ceil-log weights stay within the two-sided slack") {
    // ceil(log2 p) is within [log2 p, log2 p + 1], so over any set of at most
    // K primes the reciprocal products differ by at most 2^K.
    const auto pool = numtheory::primes_up_to(1023);
    for (u64 p : pool) {
        const double lg = std::log2(static_cast<double>(p));
        const int ceil_lg = ceil_log2(p);
        CHECK(lg <= ceil_lg + 1e-12);
        CHECK(ceil_lg <= lg + 1.0 + 1e-12);
    }
    SplitRng rng(19);
    const int K = 3;
    for (int i = 0; i < 200; ++i) {
        double exact_prod = 1.0, ceil_prod = 1.0;
        for (int t = 0; t < K; ++t) {
            const u64 p = pool[rng.below(pool.size())];
            exact_prod /= std::log2(static_cast<double>(p));
            ceil_prod /= static_cast<double>(ceil_log2(p));
        }
        CHECK(ceil_prod <= exact_prod * (1.0 + 1e-12));
        CHECK(ceil_prod >= exact_prod / std::pow(2.0, K) * (1.0 - 1e-12));
    }
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(make_cfg(4, 2).validate(), std::invalid_argument);  // m below C_K
    CHECK_THROWS_AS(make_cfg(8, 1).validate(), std::invalid_argument);
    CHECK_NOTHROW(make_cfg(6, 2).validate());
    CHECK_THROWS_AS(exact_pmf(make_cfg(13, 2)), std::invalid_argument);
    CHECK_THROWS_AS(exact_pmf(make_cfg(10, 4)), std::invalid_argument);
}
