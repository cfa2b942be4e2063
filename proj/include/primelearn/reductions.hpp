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

#include <optional>
#include <utility>
#include <vector>

#include "primelearn/ints.hpp"
#include "primelearn/oracles.hpp"

namespace primelearn::reductions {

/// Outcome of one oracle-to-factorization run. Any present factor is prime
/// and divides the input, unconditionally.
struct ReductionResult {
    std::optional<u128> factor;
    std::optional<std::pair<u32, u32>> guessed_exponents;  // (r1', r2') of the hit
    u64 candidates_tried = 0;   // per estimate stream (max over phases)
    u64 elapsed_iterations = 0; // inner verification steps across the run
    bool two_prime_form = false;
};

/// Integer candidates for the true function value given the estimate: starts
/// at round(fhat) and walks the alternating offsets 0, -1, +1, -2, +2, ...,
/// so every integer within the contract radius ceil(c*b(x)^u) appears within
/// ceil(2c*b(x)^u)+1 yields.
std::vector<long long> candidate_values(double fhat, double c, double u, u128 x);

/// Integer roots of u^(r1/g) * (ftilde - u)^(r2/g) = x^(1/g) in (0, ftilde),
/// g = gcd(r1, r2): binary search on the two monotone halves around the
/// maximum, exact integer arithmetic throughout. Empty when ftilde <= 1 or
/// when x has no exact g-th root. Returns the bracket integers of each sign
/// change, ascending.
std::vector<u128> root_search_f1(u128 ftilde, u128 x, u32 r1, u32 r2);

/// Recovers a prime factor of x = p1^r1 * p2^r2 from an estimate of the
/// prime-sum function. Guaranteed to succeed when the estimate is within the
/// oracle contract and x has exactly two distinct prime factors.
ReductionResult factor_via_f1(u128 x, const oracles::OracleModel& o);

/// Same, from estimates of the prime-product and nested-radical functions.
/// The product phase consumes its whole candidate stream before the radical
/// phase runs (entered only if some candidate divided x down to 1).
ReductionResult factor_via_f2_f3(u128 x, const oracles::OracleModel& o2,
                                 const oracles::OracleModel& o3);

/// Repeat-on-failure wrappers: independent estimates from re-seeded oracles.
ReductionResult factor_via_f1_with_retries(u128 x, const oracles::OracleModel& o, int attempts);
ReductionResult factor_via_f2_f3_with_retries(u128 x, const oracles::OracleModel& o2,
                                              const oracles::OracleModel& o3, int attempts);

}  // namespace primelearn::reductions
