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

#include "primelearn/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace primelearn::numtheory {

namespace {

// Trial-division primes, shared by factorize and the primality fast path.
const std::vector<u64>& small_primes() {
    static const std::vector<u64> table = primes_up_to(1u << 16);
    return table;
}

u64 mulmod_u64(u64 a, u64 b, u64 n) {
    return static_cast<u64>((static_cast<u128>(a) * b) % n);
}

u64 powmod_u64(u64 base, u64 exp, u64 n) {
    u64 acc = 1;
    base %= n;
    while (exp != 0) {
        if (exp & 1) acc = mulmod_u64(acc, base, n);
        base = mulmod_u64(base, base, n);
        exp >>= 1;
    }
    return acc;
}

// Witness returns true when `a` proves n composite.
bool mr_witness_u64(u64 n, u64 a) {
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    u64 x = powmod_u64(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < r; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // This witness set is deterministic for all 64-bit inputs.
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (mr_witness_u64(n, a)) return false;
    }
    return true;
}

BigInt powmod_big(BigInt base, BigInt exp, const BigInt& n) {
    BigInt acc = 1;
    base %= n;
    while (exp != 0) {
        if ((exp & 1) != 0) acc = (acc * base) % n;
        base = (base * base) % n;
        exp >>= 1;
    }
    return acc;
}

bool mr_witness_big(const BigInt& n, const BigInt& a) {
    BigInt d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    BigInt x = powmod_big(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < r; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true;
}

bool is_prime_big(const BigInt& n) {
    if (n < 2) return false;
    for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // 40 rounds at error <= 4^-40 = 2^-80. Bases are a fixed pseudo-random
    // function of n so the test stays a pure function of its input.
    const u64 lo = static_cast<u64>(n & 0xffffffffffffffffULL);
    for (int i = 0; i < 40; ++i) {
        BigInt a = 2 + BigInt(mix_u64(lo + static_cast<u64>(i))) % (n - 3);
        if (mr_witness_big(n, a)) return false;
    }
    return true;
}

u128 big_to_u128(const BigInt& v) {
    BigInt x = v;
    u128 out = 0;
    int shift = 0;
    while (x != 0) {
        out |= static_cast<u128>(static_cast<u64>(x & 0xffffffffffffffffULL)) << shift;
        x >>= 64;
        shift += 64;
    }
    return out;
}

BigInt u128_to_big(u128 v) {
    BigInt out = static_cast<u64>(v >> 64);
    out <<= 64;
    out += static_cast<u64>(v & ~u64{0});
    return out;
}

u128 mulmod_u128(u128 a, u128 b, u128 n) {
    if (n <= ~u64{0}) return mulmod_u64(static_cast<u64>(a % n), static_cast<u64>(b % n), static_cast<u64>(n));
    BigInt r = (u128_to_big(a) * u128_to_big(b)) % u128_to_big(n);
    return big_to_u128(r);
}

u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Brent's variant of the rho cycle finder. n must be composite, odd, > 1 and
// not a prime power of a tiny prime (trial division has already run).
u128 brent_rho(u128 n, SplitRng& rng) {
    if ((n & 1) == 0) return 2;
    while (true) {
        u128 y = 2 + rng.below(1000000);
        u128 c = 1 + rng.below(1000000);
        u128 m = 128;
        u128 g = 1, r = 1, q = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (u128 i = 0; i < r; ++i) y = (mulmod_u128(y, y, n) + c) % n;
            u128 k = 0;
            while (k < r && g == 1) {
                ys = y;
                const u128 steps = std::min<u128>(m, r - k);
                for (u128 i = 0; i < steps; ++i) {
                    y = (mulmod_u128(y, y, n) + c) % n;
                    q = mulmod_u128(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u128(q, n);
                k += m;
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (mulmod_u128(ys, ys, n) + c) % n;
                g = gcd_u128(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
        // Bad parameter choice; retry with fresh (y, c).
    }
}

void factor_recursive(u128 n, SplitRng& rng, std::vector<u128>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u128 d = brent_rho(n, rng);
    factor_recursive(d, rng, out);
    factor_recursive(n / d, rng, out);
}

}  // namespace

u128 FactoredInteger::recompute_value() const {
    u128 acc = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (u32 r = 0; r < mults[i]; ++r) {
            acc = mul_clamped(acc, primes[i], ~u128{0} - 1);
        }
    }
    return acc;
}

void FactoredInteger::validate() const {
    if (value < 2) throw std::invalid_argument("FactoredInteger: value must be >= 2");
    if (primes.empty() || primes.size() != mults.size())
        throw std::invalid_argument("FactoredInteger: primes/mults shape mismatch");
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (i > 0 && primes[i - 1] >= primes[i])
            throw std::invalid_argument("FactoredInteger: primes not strictly increasing");
        if (mults[i] == 0) throw std::invalid_argument("FactoredInteger: zero multiplicity");
        if (!is_prime(primes[i]))
            throw std::invalid_argument("FactoredInteger: composite entry in primes");
    }
    if (recompute_value() != value)
        throw std::invalid_argument("FactoredInteger: product does not equal value");
}

std::string to_string(FunctionId fn) {
    switch (fn) {
        case FunctionId::F1: return "f1";
        case FunctionId::F2: return "f2";
        case FunctionId::F3: return "f3";
    }
    throw std::logic_error("unreachable");
}

FunctionId function_id_from_string(std::string_view name) {
    if (name == "f1") return FunctionId::F1;
    if (name == "f2") return FunctionId::F2;
    if (name == "f3") return FunctionId::F3;
    throw std::invalid_argument("unknown function id: " + std::string(name));
}

void BitSize::validate() const {
    if (m < 2) throw std::invalid_argument("BitSize: m must be >= 2");
    if (K < 2) throw std::invalid_argument("BitSize: K must be >= 2");
}

bool is_prime(u128 n) {
    if (n <= ~u64{0}) return is_prime_u64(static_cast<u64>(n));
    return is_prime_big(u128_to_big(n));
}

bool is_prime(const BigInt& n) {
    if (n < 0) return false;
    if (n <= BigInt(~u64{0})) return is_prime_u64(static_cast<u64>(n));
    return is_prime_big(n);
}

u128 random_prime(int bits, SplitRng& rng, int max_retries) {
    if (bits < 2 || bits > 120)
        throw std::invalid_argument("random_prime: bits must be in [2, 120]");
    if (bits == 2) return rng.coin() ? 3 : 2;  // the only even prime lives here
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        // Top and bottom bits forced; the middle bits are uniform, so the
        // accepted draws are uniform over the odd candidates of the class.
        u128 candidate = (u128{1} << (bits - 1)) | 1;
        for (int chunk = 1; chunk + 64 <= bits - 1; chunk += 64)
            candidate |= static_cast<u128>(rng.next()) << chunk;
        const int rem = (bits - 1 - 1) % 64;
        if (rem > 0) {
            const int base = bits - 1 - rem;
            candidate |= static_cast<u128>(rng.next() >> (64 - rem)) << base;
        }
        if (is_prime(candidate)) return candidate;
    }
    throw std::runtime_error("random_prime: retry cap exceeded");
}

FactoredInteger factorize(u128 n) {
    if (n < 2) throw std::invalid_argument("factorize: n must be >= 2");
    std::vector<u128> flat;
    u128 rest = n;
    for (u64 p : small_primes()) {
        if (static_cast<u128>(p) * p > rest) break;
        while (rest % p == 0) {
            flat.push_back(p);
            rest /= p;
        }
    }
    if (rest > 1) {
        // Seeded from n: factorization stays a deterministic function of n.
        SplitRng rng(derive_seed(static_cast<u64>(n) ^ static_cast<u64>(n >> 64), "factorize"));
        factor_recursive(rest, rng, flat);
    }
    std::sort(flat.begin(), flat.end());
    FactoredInteger out;
    out.value = n;
    for (u128 p : flat) {
        if (!out.primes.empty() && out.primes.back() == p) {
            ++out.mults.back();
        } else {
            out.primes.push_back(p);
            out.mults.push_back(1);
        }
    }
    return out;
}

u128 kth_root(u128 x, unsigned k) {
    if (k == 0) throw std::invalid_argument("kth_root: k must be >= 1");
    if (k == 1 || x < 2) return x;
    u128 hi = u128{1} << (bit_width_u128(x) / k + 1);
    u128 lo = 1;
    while (lo < hi) {  // smallest r with r^k > x, minus one
        u128 mid = lo + (hi - lo + 1) / 2;
        if (pow_clamped(mid, k, x) <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

std::optional<std::pair<u128, unsigned>> prime_power_decompose(u128 z) {
    if (z < 2) throw std::invalid_argument("prime_power_decompose: z must be >= 2");
    const int max_k = bit_width_u128(z);
    for (unsigned k = 1; k <= static_cast<unsigned>(max_k); ++k) {
        u128 root = kth_root(z, k);
        if (pow_clamped(root, k, z) == z && is_prime(root)) return std::make_pair(root, k);
    }
    return std::nullopt;
}

std::optional<std::pair<BigInt, unsigned>> prime_power_decompose(const BigInt& z) {
    if (z < 2) throw std::invalid_argument("prime_power_decompose: z must be >= 2");
    const unsigned max_k = static_cast<unsigned>(boost::multiprecision::msb(z)) + 1;
    for (unsigned k = 1; k <= max_k; ++k) {
        // Floor k-th root by binary search.
        BigInt lo = 1, hi = BigInt(1) << (boost::multiprecision::msb(z) / k + 1);
        while (lo < hi) {
            BigInt mid = lo + (hi - lo + 1) / 2;
            if (boost::multiprecision::pow(mid, k) <= z)
                lo = mid;
            else
                hi = mid - 1;
        }
        if (boost::multiprecision::pow(lo, k) == z && is_prime(lo)) return std::make_pair(lo, k);
    }
    return std::nullopt;
}

double RadicalValue::to_double() const {
    double m = mantissa.convert_to<double>();
    for (unsigned i = 0; i < root_log2; ++i) m = std::sqrt(m);
    return m;
}

std::string RadicalValue::decimal_string(int digits) const {
    if (digits < 0) throw std::invalid_argument("decimal_string: digits must be >= 0");
    // value * 10^digits = (mantissa * (10^digits)^(2^e)) ^ (1/2^e)
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits));
    BigInt scaled = mantissa * boost::multiprecision::pow(scale, 1u << root_log2);
    for (unsigned i = 0; i < root_log2; ++i) scaled = boost::multiprecision::sqrt(scaled);
    std::string whole = scaled.str();
    if (digits == 0) return whole;
    if (whole.size() <= static_cast<std::size_t>(digits))
        whole.insert(0, static_cast<std::size_t>(digits) + 1 - whole.size(), '0');
    whole.insert(whole.size() - static_cast<std::size_t>(digits), ".");
    return whole;
}

u128 prime_sum(const FactoredInteger& fx) {
    u128 acc = 0;
    for (u128 p : fx.primes) acc += p;
    return acc;
}

u128 prime_product(const FactoredInteger& fx) {
    u128 acc = 1;
    for (u128 p : fx.primes) acc *= p;  // divides fx.value, cannot overflow
    return acc;
}

RadicalValue radical_power(const FactoredInteger& fx) {
    // f3 = prod p_i^(2^(2-i)); with e = max(0, omega-2) the value is
    // (prod p_i^(2^(omega-i)))^(1/2^e), exactly.
    RadicalValue out;
    const int omega = fx.omega();
    out.root_log2 = omega <= 2 ? 0 : static_cast<unsigned>(omega - 2);
    out.mantissa = 1;
    for (int i = 0; i < omega; ++i) {
        const unsigned exp = 1u << (omega - 1 - i + (omega <= 2 ? 2 - omega : 0));
        out.mantissa *= boost::multiprecision::pow(u128_to_big(fx.primes[static_cast<std::size_t>(i)]), exp);
    }
    return out;
}

RadicalValue eval_f(FunctionId fn, const FactoredInteger& fx) {
    RadicalValue out;
    switch (fn) {
        case FunctionId::F1:
            out.mantissa = u128_to_big(prime_sum(fx));
            return out;
        case FunctionId::F2:
            out.mantissa = u128_to_big(prime_product(fx));
            return out;
        case FunctionId::F3:
            return radical_power(fx);
    }
    throw std::logic_error("unreachable");
}

std::vector<std::uint8_t> distinct_factor_counts(u64 limit) {
    std::vector<std::uint8_t> counts(limit + 1, 0);
    for (u64 p = 2; p <= limit; ++p) {
        if (counts[p] != 0) continue;  // p has a smaller prime factor
        for (u64 q = p; q <= limit; q += p) ++counts[q];
    }
    return counts;
}

u64 pi_omega_exact(int m, int omega) {
    if (m < 1 || m > 24) throw std::invalid_argument("pi_omega_exact: m must be in [1, 24]");
    if (omega < 1) throw std::invalid_argument("pi_omega_exact: omega must be >= 1");
    const u64 limit = u64{1} << m;
    const auto counts = distinct_factor_counts(limit);
    u64 total = 0;
    for (u64 n = 2; n <= limit; ++n)
        if (counts[n] == omega) ++total;
    return total;
}

std::vector<u64> primes_up_to(u64 n) {
    std::vector<bool> composite(n + 1, false);
    std::vector<u64> out;
    for (u64 p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        out.push_back(p);
        for (u64 q = p * p; q <= n; q += p) composite[q] = true;
    }
    return out;
}

std::vector<u64> primes_in_bit_class(int j) {
    if (j < 2 || j > 26) throw std::invalid_argument("primes_in_bit_class: j must be in [2, 26]");
    const u64 lo = u64{1} << (j - 1);
    const u64 hi = (u64{1} << j) - 1;
    // Segmented sieve over [lo, hi].
    std::vector<bool> composite(hi - lo + 1, false);
    for (u64 p : primes_up_to(u64{1} << ((j + 1) / 2))) {
        u64 first = std::max(p * p, ((lo + p - 1) / p) * p);
        for (u64 q = first; q <= hi; q += p) composite[q - lo] = true;
    }
    std::vector<u64> out;
    for (u64 n = lo; n <= hi; ++n)
        if (!composite[n - lo] && n >= 2) out.push_back(n);
    return out;
}

namespace {

void enumerate_mults(const std::vector<u128>& primes, std::size_t i, u128 budget,
                     std::vector<u32>& current, std::vector<std::vector<u32>>* sink, u64& count) {
    if (i == primes.size()) {
        ++count;
        if (sink) sink->push_back(current);
        return;
    }
    u128 power = primes[i];
    for (u32 r = 1; power <= budget; ++r) {
        current.push_back(r);
        enumerate_mults(primes, i + 1, budget / power, current, sink, count);
        current.pop_back();
        if (power > budget / primes[i]) break;
        power *= primes[i];
    }
}

u128 remaining_min_product(const std::vector<u128>& primes, std::size_t from) {
    u128 acc = 1;
    for (std::size_t i = from; i < primes.size(); ++i) acc = mul_clamped(acc, primes[i], ~u128{0} - 1);
    return acc;
}

}  // namespace

MultiplicityCount count_multiplicity_vectors(const std::vector<u128>& primes, int m) {
    MultiplicityCount out;
    if (primes.empty()) throw std::invalid_argument("count_multiplicity_vectors: empty prime set");
    if (m < 1 || m > 126) throw std::invalid_argument("count_multiplicity_vectors: m out of range");
    const u128 budget = u128{1} << m;
    u64 count = 0;
    if (remaining_min_product(primes, 0) <= budget) {
        std::vector<u32> current;
        enumerate_mults(primes, 0, budget, current, nullptr, count);
    }
    out.count = count;
    double volume = 1.0;
    for (std::size_t i = 1; i <= primes.size(); ++i) volume *= static_cast<double>(m) / static_cast<double>(i);
    for (u128 p : primes) volume /= std::log2(static_cast<double>(p));
    out.volume = volume;
    return out;
}

std::vector<std::vector<u32>> enumerate_multiplicity_vectors(const std::vector<u128>& primes,
                                                             int m) {
    if (primes.empty()) throw std::invalid_argument("enumerate_multiplicity_vectors: empty prime set");
    if (m < 1 || m > 126) throw std::invalid_argument("enumerate_multiplicity_vectors: m out of range");
    const u128 budget = u128{1} << m;
    std::vector<std::vector<u32>> out;
    if (remaining_min_product(primes, 0) > budget) return out;
    std::vector<u32> current;
    u64 count = 0;
    enumerate_mults(primes, 0, budget, current, &out, count);
    return out;
}

}  // namespace primelearn::numtheory
