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

#include "primelearn/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace primelearn::reductions {

using numtheory::is_prime;
using numtheory::kth_root;
using oracles::OracleModel;

namespace {

constexpr double kLog2Of3 = 1.5849625007211562;

// u^a * (ftilde-u)^b, saturated above cap.
u128 half_product(u128 u, u128 ftilde, u32 a, u32 b, u128 cap) {
    const u128 lhs = pow_clamped(u, a, cap);
    if (lhs > cap) return cap + 1;
    return mul_clamped(lhs, pow_clamped(ftilde - u, b, cap), cap);
}

struct PowerForm {
    u32 degree;  // g with x = root^g
    u128 root;
};

// Degrees g for which x is an exact g-th power, with the roots.
std::vector<PowerForm> exact_power_forms(u128 x) {
    std::vector<PowerForm> out;
    const int max_k = bit_width_u128(x);
    for (u32 g = 1; g <= static_cast<u32>(max_k); ++g) {
        const u128 root = kth_root(x, g);
        if (pow_clamped(root, g, x) == x) out.push_back({g, root});
    }
    return out;
}

bool verified_factor(u128 h, u128 x) { return h >= 2 && x % h == 0 && is_prime(h); }

}  // namespace

std::vector<long long> candidate_values(double fhat, double c, double u, u128 x) {
    if (c <= 0.0) throw std::invalid_argument("candidate_values: c must be positive");
    const double bound = c * std::pow(static_cast<double>(ceil_log2(x)), u);
    const u64 cont_max = static_cast<u64>(std::ceil(2.0 * bound));
    // Garbage estimates may be far off; the walk stays in long long range.
    const double clamped = std::clamp(fhat, -0x1.0p62, 0x1.0p62);
    std::vector<long long> out;
    out.reserve(cont_max + 1);
    long long value = std::llround(clamped);
    out.push_back(value);
    for (u64 cont = 1; cont <= cont_max; ++cont) {
        value += (cont & 1) ? -static_cast<long long>(cont) : static_cast<long long>(cont);
        out.push_back(value);
    }
    return out;
}

std::vector<u128> root_search_f1(u128 ftilde, u128 x, u32 r1, u32 r2) {
    std::vector<u128> out;
    if (ftilde <= 1) return out;
    if (r1 < 1 || r2 < 1) throw std::invalid_argument("root_search_f1: exponents must be >= 1");
    const u32 g = std::gcd(r1, r2);
    const u32 a = r1 / g, b = r2 / g;
    u128 target = x;
    if (g > 1) {
        const u128 root = kth_root(x, g);
        if (pow_clamped(root, g, x) != x) return out;  // no exact g-th root
        target = root;
    }

    // Split point of the two monotone halves: u* = a*ftilde/(a+b).
    const u128 numer = static_cast<u128>(a) * ftilde;
    const u128 denom = a + b;
    u128 lo_top = numer / denom;                    // floor(u*)
    u128 hi_bottom = (numer + denom - 1) / denom;   // ceil(u*)
    lo_top = std::min(lo_top, ftilde - 1);
    hi_bottom = std::max<u128>(hi_bottom, 1);

    const auto q = [&](u128 u) { return half_product(u, ftilde, a, b, target); };

    // Rising half (0, u*]: the integer lattice sees a sign change iff the
    // integer maximum clears the target.
    if (lo_top >= 1 && q(lo_top) >= target) {
        u128 lo = 1, hi = lo_top;
        while (lo < hi) {  // smallest u with q(u) >= target
            const u128 mid = lo + (hi - lo) / 2;
            if (q(mid) >= target)
                hi = mid;
            else
                lo = mid + 1;
        }
        if (q(lo) == target) {
            out.push_back(lo);
        } else {
            if (lo > 1) out.push_back(lo - 1);
            out.push_back(lo);
        }
    }
    // Falling half [u*, ftilde).
    if (hi_bottom <= ftilde - 1 && q(hi_bottom) >= target) {
        u128 lo = hi_bottom, hi = ftilde - 1;
        while (lo < hi) {  // largest u with q(u) >= target
            const u128 mid = lo + (hi - lo + 1) / 2;
            if (q(mid) >= target)
                lo = mid;
            else
                hi = mid - 1;
        }
        if (q(lo) == target) {
            out.push_back(lo);
        } else {
            out.push_back(lo);
            if (lo + 1 <= ftilde - 1) out.push_back(lo + 1);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ReductionResult factor_via_f1(u128 x, const OracleModel& o) {
    if (o.fn != numtheory::FunctionId::F1)
        throw std::invalid_argument("factor_via_f1: oracle must estimate the prime-sum function");
    if (x < 2 || x > (u128{1} << 62))
        throw std::invalid_argument("factor_via_f1: x out of supported range");
    ReductionResult res;
    res.two_prime_form = numtheory::factorize(x).omega() == 2;

    const double fhat = oracles::query(o, x).value;
    const u32 max_exp = static_cast<u32>(bit_width_u128(x) - 1);  // floor(log2 x)
    const auto forms = exact_power_forms(x);

    for (long long cand : candidate_values(fhat, o.c, o.u, x)) {
        ++res.candidates_tried;
        if (cand < 2) continue;
        const u128 ftilde = static_cast<u128>(cand);
        for (const auto& form : forms) {
            if (form.degree > max_exp) continue;
            const double log2_target = std::log2(static_cast<double>(form.root));
            const u32 pair_cap = max_exp / form.degree;
            for (u32 a = 1; a <= pair_cap; ++a) {
                for (u32 b = 1; b <= pair_cap; ++b) {
                    if (std::gcd(a, b) != 1) continue;
                    // Two distinct primes, so one base is >= 2 and the other >= 3.
                    const double need = std::min(a + b * kLog2Of3, a * kLog2Of3 + b);
                    if (need > log2_target + 1e-9) continue;
                    ++res.elapsed_iterations;
                    for (u128 h : root_search_f1(ftilde, x, a * form.degree, b * form.degree)) {
                        if (verified_factor(h, x)) {
                            // Smaller root wins when both halves verify.
                            if (!res.factor || h < *res.factor) {
                                res.factor = h;
                                res.guessed_exponents = {a * form.degree, b * form.degree};
                            }
                        }
                    }
                    if (res.factor) return res;
                }
            }
        }
    }
    return res;
}

ReductionResult factor_via_f2_f3(u128 x, const OracleModel& o2, const OracleModel& o3) {
    if (o2.fn != numtheory::FunctionId::F2 || o3.fn != numtheory::FunctionId::F3)
        throw std::invalid_argument("factor_via_f2_f3: oracles must estimate the product and radical functions");
    if (x < 2 || x > (u128{1} << 62))
        throw std::invalid_argument("factor_via_f2_f3: x out of supported range");
    ReductionResult res;
    res.two_prime_form = numtheory::factorize(x).omega() == 2;

    // Product phase. The whole candidate stream runs before the radical phase
    // so a stray candidate that divides x down to 1 cannot pre-empt the true
    // product value.
    bool saw_unit = false;
    u64 phase_candidates = 0;
    const double fhat2 = oracles::query(o2, x).value;
    for (long long cand : candidate_values(fhat2, o2.c, o2.u, x)) {
        ++phase_candidates;
        if (cand < 2) continue;
        const u128 ftilde = static_cast<u128>(cand);
        u128 z = x;
        while (z % ftilde == 0) z /= ftilde;
        ++res.elapsed_iterations;
        if (z == 1) {
            saw_unit = true;
            continue;
        }
        if (z == x) continue;  // did not divide at all; z = x is handled once below
        const auto pp = numtheory::prime_power_decompose(z);
        if (pp && verified_factor(pp->first, x)) {
            res.factor = pp->first;
            res.candidates_tried = phase_candidates;
            return res;
        }
    }
    res.candidates_tried = phase_candidates;
    // A value with a single prime factor never needs the estimates at all.
    if (const auto pp = numtheory::prime_power_decompose(x); pp) {
        res.factor = pp->first;
        return res;
    }
    if (!saw_unit) return res;

    // Radical phase: x^2/f^r1' covers r1 < 2*r2, x/f^r2' covers r1 > 2*r2.
    const u32 max_exp = static_cast<u32>(bit_width_u128(x) - 1);
    const u128 x_squared = x * x;
    phase_candidates = 0;
    const double fhat3 = oracles::query(o3, x).value;
    for (long long cand : candidate_values(fhat3, o3.c, o3.u, x)) {
        ++phase_candidates;
        if (cand < 2) continue;
        const u128 ftilde = static_cast<u128>(cand);
        for (u32 r = 1; r <= max_exp; ++r) {
            const u128 power = pow_clamped(ftilde, r, x_squared);
            if (power > x_squared) break;
            ++res.elapsed_iterations;
            if (x_squared % power == 0 && x_squared / power >= 2) {
                const auto pp = numtheory::prime_power_decompose(x_squared / power);
                if (pp && verified_factor(pp->first, x)) {
                    res.factor = pp->first;
                    res.guessed_exponents = {r, 0};
                    break;
                }
            }
            if (power <= x && x % power == 0 && x / power >= 2) {
                const auto pp = numtheory::prime_power_decompose(x / power);
                if (pp && verified_factor(pp->first, x)) {
                    res.factor = pp->first;
                    res.guessed_exponents = {0, r};
                    break;
                }
            }
        }
        if (res.factor) break;
    }
    res.candidates_tried = std::max(res.candidates_tried, phase_candidates);
    return res;
}

ReductionResult factor_via_f1_with_retries(u128 x, const OracleModel& o, int attempts) {
    if (attempts < 1) throw std::invalid_argument("factor_via_f1_with_retries: attempts must be >= 1");
    ReductionResult last;
    for (int i = 0; i < attempts; ++i) {
        OracleModel attempt = o;
        attempt.seed = derive_seed(o.seed, "estimate-retry", static_cast<u64>(i));
        last = factor_via_f1(x, attempt);
        if (last.factor) return last;
    }
    return last;
}

ReductionResult factor_via_f2_f3_with_retries(u128 x, const OracleModel& o2,
                                              const OracleModel& o3, int attempts) {
    if (attempts < 1) throw std::invalid_argument("factor_via_f2_f3_with_retries: attempts must be >= 1");
    ReductionResult last;
    for (int i = 0; i < attempts; ++i) {
        OracleModel a2 = o2, a3 = o3;
        a2.seed = derive_seed(o2.seed, "estimate-retry", static_cast<u64>(i));
        a3.seed = derive_seed(o3.seed, "estimate-retry", static_cast<u64>(i));
        last = factor_via_f2_f3(x, a2, a3);
        if (last.factor) return last;
    }
    return last;
}

}  // namespace primelearn::reductions
