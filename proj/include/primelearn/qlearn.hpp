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

#include <complex>
#include <string>
#include <vector>

#include "primelearn/ints.hpp"
#include "primelearn/rng.hpp"

namespace primelearn::qlearn {

enum class GateKind { H, S, T, X, Z, CNOT, CZ };

std::string to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

struct Gate {
    GateKind kind;
    int target = 0;
    int control = -1;  // two-qubit kinds only
};

/// A gate list on `qubits` wires. Budget: at most 20*k^2 gates, every wire
/// touched at least once.
struct CircuitSpec {
    int qubits = 1;
    std::vector<Gate> gates;
    u64 seed = 0;

    std::string to_json() const;
    static CircuitSpec from_json(std::string_view text);
};

/// Seeded pseudo-random Clifford+T circuit (stand-in for the hard sequence,
/// which is non-constructive). Deterministic in (k, seed).
CircuitSpec build_circuit(int k, u64 seed);

/// Complex amplitudes over 2^k basis states, wire 0 = most significant bit.
struct StateVector {
    std::vector<std::complex<double>> amps;

    int qubits() const;
    double norm() const;
};

/// Amplitude encoding: entry i of x (1-based) becomes the amplitude of basis
/// index i-1, normalized; k = max(1, ceil(log2 len(x))) qubits.
StateVector encode_state(const std::vector<double>& x);

void apply_gate(StateVector& state, const Gate& gate);
void apply_circuit(StateVector& state, const CircuitSpec& circuit);

/// <Z on wire 0> of the state.
double z_first_expectation(const StateVector& state);

/// Deterministic per-length circuits derived from one seed.
class CircuitFamily {
public:
    explicit CircuitFamily(u64 seed) : seed_(seed) {}
    /// Circuit acting on max(1, ceil(log2 ell)) qubits.
    CircuitSpec circuit_for_length(std::size_t ell) const;
    u64 seed() const { return seed_; }

private:
    u64 seed_;
};

/// len(x)^(u+1) * <x| U^dag (Z (x) I ...) U |x>, the exact target function.
double exact_value(const std::vector<double>& x, double u_exp, const CircuitFamily& family);

/// Measurement-shot budget for additive error c at confidence 1 - delta:
/// ceil(2 * ell^(2(u+1)) * ln(2/delta) / c^2), from the two-sided Hoeffding
/// bound for +-1 outcomes.
u64 shot_budget(std::size_t ell, double u_exp, double c, double delta);

/// The sampling estimator: simulates the shot outcomes and rescales the
/// empirical mean. |estimate - exact| < c with probability >= 1 - delta.
double estimate_value(const std::vector<double>& x, double u_exp, double c, double delta,
                      const CircuitFamily& family, SplitRng& rng);

/// Same estimator against an explicitly supplied circuit.
double estimate_with_circuit(const std::vector<double>& x, double u_exp, double c, double delta,
                             const CircuitSpec& circuit, SplitRng& rng);

/// Quadratic features [x1^2, ..., xl^2, 2x1x2, ..., 2x(l-1)xl] / ||x||^2;
/// dimension l(l+1)/2. The normalization matches the amplitude encoding so
/// the linear identity against the Hermitian form is exact.
std::vector<double> feature_vector(const std::vector<double>& x);

struct LearnedModel {
    std::size_t ell = 0;
    double u_exp = 0.0;
    std::vector<double> coefficients;  // dimension ell(ell+1)/2
};

struct FitResult {
    LearnedModel model;
    double residual_norm = 0.0;
};

/// Least-squares recovery of the vectorized Hermitian form from labeled
/// samples of one fixed length. Requires n >= ell(ell+1)/2 and a full-rank
/// design; throws std::invalid_argument otherwise.
FitResult fit_model(const std::vector<std::pair<std::vector<double>, double>>& samples,
                    double u_exp);

double predict(const LearnedModel& model, const std::vector<double>& x);

/// Bookkeeping for covering every length <= ell: sum of i^2.
u64 sample_budget_all_lengths(int ell);

}  // namespace primelearn::qlearn
