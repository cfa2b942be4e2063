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

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "primelearn/ints.hpp"
#include "primelearn/rng.hpp"

namespace primelearn::numtheory {

using BigInt = boost::multiprecision::cpp_int;

/// An integer together with its distinct prime factors (ascending) and their
/// multiplicities. Ground truth for every function evaluation in the library.
struct FactoredInteger {
    u128 value = 0;
    std::vector<u128> primes;  // p_1 < p_2 < ... < p_omega
    std::vector<u32> mults;    // r_i >= 1, same length as primes

    int omega() const { return static_cast<int>(primes.size()); }
    u128 recompute_value() const;
    /// Throws std::invalid_argument if any structural invariant is broken.
    void validate() const;
};

/// The three functions of the distinct prime factors: sum, product, and the
/// nested-radical power (p_1^2 * p_2 * p_3^(1/2) * ...).
enum class FunctionId { F1, F2, F3 };

std::string to_string(FunctionId fn);
FunctionId function_id_from_string(std::string_view name);

/// Bit budget m and distinct-prime cap K of a problem scale.
struct BitSize {
    int m = 2;
    int K = 2;
    void validate() const;
};

/// Primality test. Deterministic for n < 2^64 (fixed Miller-Rabin witness
/// set); for wider inputs 40 pseudo-random rounds give error <= 2^-80.
/// A pure function of n.
bool is_prime(u128 n);
bool is_prime(const BigInt& n);

/// Uniformly random prime with exactly `bits` bits (2^(bits-1) <= p < 2^bits).
/// Throws std::runtime_error if the rejection loop exceeds its retry cap.
u128 random_prime(int bits, SplitRng& rng, int max_retries = 100000);

/// Full factorization by trial division plus Brent's cycle-finding method.
/// Desk-scale: any n >= 2 representable in 128 bits.
FactoredInteger factorize(u128 n);

/// (p, r) with z = p^r if z is a prime power, nullopt otherwise.
std::optional<std::pair<u128, unsigned>> prime_power_decompose(u128 z);
std::optional<std::pair<BigInt, unsigned>> prime_power_decompose(const BigInt& z);

/// Floor of the k-th root.
u128 kth_root(u128 x, unsigned k);

/// Exact value of the nested-radical function: mantissa^(1 / 2^root_log2).
/// Integral whenever the input has at most two distinct primes.
struct RadicalValue {
    BigInt mantissa;
    unsigned root_log2 = 0;

    bool integral() const { return root_log2 == 0; }
    double to_double() const;
    /// Decimal rendering with `digits` digits after the point, computed with
    /// integer square roots only (last digit may be off by one ulp).
    std::string decimal_string(int digits) const;
};

u128 prime_sum(const FactoredInteger& fx);      // f1
u128 prime_product(const FactoredInteger& fx);  // f2
RadicalValue radical_power(const FactoredInteger& fx);  // f3

/// Uniform dispatch used by oracles; F1/F2 are exact integers (root_log2 = 0).
RadicalValue eval_f(FunctionId fn, const FactoredInteger& fx);

/// Number of distinct prime factors of every n in [0, limit], by sieve.
std::vector<std::uint8_t> distinct_factor_counts(u64 limit);

/// Exact count of integers n <= 2^m with exactly `omega` distinct prime
/// factors. Brute-force oracle; m <= 24.
u64 pi_omega_exact(int m, int omega);

/// All primes <= n, ascending.
std::vector<u64> primes_up_to(u64 n);

/// Primes in [2^(j-1), 2^j), ascending. j <= 26 (enumeration oracle scale).
std::vector<u64> primes_in_bit_class(int j);

struct MultiplicityCount {
    u64 count = 0;       // exact number of r >= 1 with prod p_i^r_i <= 2^m
    double volume = 0.0; // simplex-volume approximation m^w/w! * prod 1/log2(p_i)
};

/// Counts exponent vectors by budgeted recursion; also reports the volume
/// approximation the count converges to as m grows.
MultiplicityCount count_multiplicity_vectors(const std::vector<u128>& primes, int m);

/// The vectors themselves, in deterministic (lexicographic) order.
std::vector<std::vector<u32>> enumerate_multiplicity_vectors(const std::vector<u128>& primes,
                                                             int m);

}  // namespace primelearn::numtheory
