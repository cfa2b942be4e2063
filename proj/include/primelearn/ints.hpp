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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace primelearn {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Index of the highest set bit plus one; 0 for x == 0.
inline int bit_width_u128(u128 x) {
    int w = 0;
    while (x != 0) {
        x >>= 1;
        ++w;
    }
    return w;
}

/// Number of bits in the plain binary representation, i.e. j such that
/// 2^(j-1) <= x < 2^j. Used to assign primes to bit classes.
inline int bit_length(u128 x) { return bit_width_u128(x); }

/// Input-size measure b(x) = ceil(log2 x) for x >= 2, with b(1) = 1.
inline int ceil_log2(u128 x) {
    if (x == 0) throw std::invalid_argument("ceil_log2: x must be positive");
    if (x == 1) return 1;
    return bit_width_u128(x - 1);
}

inline std::string u128_to_string(u128 x) {
    if (x == 0) return "0";
    std::string out;
    while (x != 0) {
        out.push_back(static_cast<char>('0' + static_cast<unsigned>(x % 10)));
        x /= 10;
    }
    return {out.rbegin(), out.rend()};
}

inline std::string i128_to_string(i128 x) {
    if (x < 0) return "-" + u128_to_string(static_cast<u128>(-x));
    return u128_to_string(static_cast<u128>(x));
}

inline u128 u128_from_string(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("u128_from_string: empty input");
    u128 x = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9')
            throw std::invalid_argument("u128_from_string: not a decimal digit");
        u128 next = x * 10 + static_cast<unsigned>(ch - '0');
        if (next / 10 != x) throw std::out_of_range("u128_from_string: overflow");
        x = next;
    }
    return x;
}

/// a*b, saturated to cap+1 whenever the true product exceeds cap. Only the
/// comparison against cap is meaningful for saturated results, so cap must be
/// < 2^128 - 1.
inline u128 mul_clamped(u128 a, u128 b, u128 cap) {
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap + 1;
    return a * b;
}

/// base^e with the same saturation convention as mul_clamped.
inline u128 pow_clamped(u128 base, unsigned e, u128 cap) {
    u128 acc = 1;
    for (unsigned i = 0; i < e; ++i) {
        acc = mul_clamped(acc, base, cap);
        if (acc > cap) return cap + 1;
    }
    return acc;
}

}  // namespace primelearn
