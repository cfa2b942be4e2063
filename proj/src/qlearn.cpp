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

#include "primelearn/qlearn.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace primelearn::qlearn {

namespace {

constexpr int kMaxQubits = 12;

int min_qubits_for(std::size_t ell) {
    int k = 1;
    while ((std::size_t{1} << k) < ell) ++k;
    return k;
}

double squared_norm(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc;
}

}  // namespace

std::string to_string(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::T: return "T";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CZ: return "CZ";
    }
    throw std::logic_error("unreachable");
}

GateKind gate_kind_from_string(std::string_view name) {
    if (name == "H") return GateKind::H;
    if (name == "S") return GateKind::S;
    if (name == "T") return GateKind::T;
    if (name == "X") return GateKind::X;
    if (name == "Z") return GateKind::Z;
    if (name == "CNOT") return GateKind::CNOT;
    if (name == "CZ") return GateKind::CZ;
    throw std::invalid_argument("unknown gate kind: " + std::string(name));
}

std::string CircuitSpec::to_json() const {
    nlohmann::ordered_json j;
    j["qubits"] = qubits;
    j["seed"] = seed;
    auto& gates_json = j["gates"] = nlohmann::ordered_json::array();
    for (const auto& g : gates) {
        nlohmann::ordered_json gj;
        gj["kind"] = to_string(g.kind);
        gj["target"] = g.target;
        if (g.control >= 0) gj["control"] = g.control;
        gates_json.push_back(std::move(gj));
    }
    return j.dump(2) + "\n";
}

CircuitSpec CircuitSpec::from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    CircuitSpec spec;
    spec.qubits = j.at("qubits").get<int>();
    spec.seed = j.at("seed").get<u64>();
    for (const auto& gj : j.at("gates")) {
        Gate g;
        g.kind = gate_kind_from_string(gj.at("kind").get<std::string>());
        g.target = gj.at("target").get<int>();
        g.control = gj.contains("control") ? gj.at("control").get<int>() : -1;
        spec.gates.push_back(g);
    }
    return spec;
}

CircuitSpec build_circuit(int k, u64 seed) {
    if (k < 1 || k > kMaxQubits)
        throw std::invalid_argument("build_circuit: qubit count must be in [1, 12]");
    SplitRng rng(derive_seed(seed, "circuit-gates", static_cast<u64>(k)));
    CircuitSpec spec;
    spec.qubits = k;
    spec.seed = seed;
    // One opening layer touching every wire, then a random tail; total stays
    // far below the 20*k^2 budget.
    for (int q = 0; q < k; ++q) spec.gates.push_back({GateKind::H, q, -1});
    const int tail = static_cast<int>(6 * k + rng.below(static_cast<u64>(4 * k + 1)));
    for (int i = 0; i < tail; ++i) {
        const bool two_qubit = k >= 2 && rng.below(3) == 0;
        if (two_qubit) {
            const int t = static_cast<int>(rng.below(static_cast<u64>(k)));
            int c = static_cast<int>(rng.below(static_cast<u64>(k - 1)));
            if (c >= t) ++c;
            spec.gates.push_back({rng.coin() ? GateKind::CNOT : GateKind::CZ, t, c});
        } else {
            static constexpr GateKind kinds[] = {GateKind::H, GateKind::S, GateKind::T,
                                                 GateKind::X, GateKind::Z};
            const auto kind = kinds[rng.below(5)];
            spec.gates.push_back({kind, static_cast<int>(rng.below(static_cast<u64>(k))), -1});
        }
    }
    return spec;
}

int StateVector::qubits() const {
    int k = 0;
    while ((std::size_t{1} << k) < amps.size()) ++k;
    return k;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto& a : amps) acc += std::norm(a);
    return std::sqrt(acc);
}

StateVector encode_state(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("encode_state: empty string");
    const double nrm2 = squared_norm(x);
    if (nrm2 == 0.0) throw std::invalid_argument("encode_state: all-zero string");
    const int k = min_qubits_for(x.size());
    StateVector state;
    state.amps.assign(std::size_t{1} << k, {0.0, 0.0});
    const double inv = 1.0 / std::sqrt(nrm2);
    for (std::size_t i = 0; i < x.size(); ++i) state.amps[i] = {x[i] * inv, 0.0};
    return state;
}

void apply_gate(StateVector& state, const Gate& gate) {
    const int k = state.qubits();
    if (gate.target < 0 || gate.target >= k) throw std::invalid_argument("apply_gate: bad target");
    const std::size_t n = state.amps.size();
    // Wire q maps to index bit (k-1-q): wire 0 is the most significant bit,
    // matching the leftmost factor of the observable's tensor product.
    const std::size_t tbit = std::size_t{1} << (k - 1 - gate.target);
    using namespace std::complex_literals;
    switch (gate.kind) {
        case GateKind::H: {
            const double s = std::numbers::sqrt2 / 2.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i & tbit) continue;
                const auto a0 = state.amps[i], a1 = state.amps[i | tbit];
                state.amps[i] = s * (a0 + a1);
                state.amps[i | tbit] = s * (a0 - a1);
            }
            break;
        }
        case GateKind::S:
            for (std::size_t i = 0; i < n; ++i)
                if (i & tbit) state.amps[i] *= 1.0i;
            break;
        case GateKind::T: {
            const std::complex<double> phase = std::polar(1.0, std::numbers::pi / 4.0);
            for (std::size_t i = 0; i < n; ++i)
                if (i & tbit) state.amps[i] *= phase;
            break;
        }
        case GateKind::X:
            for (std::size_t i = 0; i < n; ++i)
                if (!(i & tbit)) std::swap(state.amps[i], state.amps[i | tbit]);
            break;
        case GateKind::Z:
            for (std::size_t i = 0; i < n; ++i)
                if (i & tbit) state.amps[i] = -state.amps[i];
            break;
        case GateKind::CNOT:
        case GateKind::CZ: {
            if (gate.control < 0 || gate.control >= k || gate.control == gate.target)
                throw std::invalid_argument("apply_gate: bad control");
            const std::size_t cbit = std::size_t{1} << (k - 1 - gate.control);
            if (gate.kind == GateKind::CNOT) {
                for (std::size_t i = 0; i < n; ++i)
                    if ((i & cbit) && !(i & tbit)) std::swap(state.amps[i], state.amps[i | tbit]);
            } else {
                for (std::size_t i = 0; i < n; ++i)
                    if ((i & cbit) && (i & tbit)) state.amps[i] = -state.amps[i];
            }
            break;
        }
    }
}

void apply_circuit(StateVector& state, const CircuitSpec& circuit) {
    if (state.qubits() != circuit.qubits)
        throw std::invalid_argument("apply_circuit: qubit count mismatch");
    for (const auto& g : circuit.gates) apply_gate(state, g);
}

double z_first_expectation(const StateVector& state) {
    const std::size_t top = state.amps.size() >> 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < state.amps.size(); ++i)
        acc += (i < top ? 1.0 : -1.0) * std::norm(state.amps[i]);
    return acc;
}

CircuitSpec CircuitFamily::circuit_for_length(std::size_t ell) const {
    if (ell == 0) throw std::invalid_argument("circuit_for_length: empty length");
    return build_circuit(min_qubits_for(ell), seed_);
}

double exact_value(const std::vector<double>& x, double u_exp, const CircuitFamily& family) {
    StateVector state = encode_state(x);
    apply_circuit(state, family.circuit_for_length(x.size()));
    const double scale = std::pow(static_cast<double>(x.size()), u_exp + 1.0);
    return scale * z_first_expectation(state);
}

u64 shot_budget(std::size_t ell, double u_exp, double c, double delta) {
    if (c <= 0.0) throw std::invalid_argument("shot_budget: c must be positive");
    if (delta <= 0.0 || delta >= 0.5) throw std::invalid_argument("shot_budget: delta must be in (0, 1/2)");
    const double scale = std::pow(static_cast<double>(ell), 2.0 * (u_exp + 1.0));
    return static_cast<u64>(std::ceil(2.0 * scale * std::log(2.0 / delta) / (c * c)));
}

double estimate_value(const std::vector<double>& x, double u_exp, double c, double delta,
                      const CircuitFamily& family, SplitRng& rng) {
    return estimate_with_circuit(x, u_exp, c, delta, family.circuit_for_length(x.size()), rng);
}

double estimate_with_circuit(const std::vector<double>& x, double u_exp, double c, double delta,
                             const CircuitSpec& circuit, SplitRng& rng) {
    StateVector state = encode_state(x);
    apply_circuit(state, circuit);
    // Single-wire measurement: the exact outcome law is a Bernoulli over +-1.
    const std::size_t top = state.amps.size() >> 1;
    double p_plus = 0.0;
    for (std::size_t i = 0; i < top; ++i) p_plus += std::norm(state.amps[i]);
    const u64 shots = shot_budget(x.size(), u_exp, c, delta);
    u64 plus = 0;
    for (u64 s = 0; s < shots; ++s)
        if (rng.unit() < p_plus) ++plus;
    const double mean = (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) /
                        static_cast<double>(shots);
    return std::pow(static_cast<double>(x.size()), u_exp + 1.0) * mean;
}

std::vector<double> feature_vector(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("feature_vector: empty string");
    const double nrm2 = squared_norm(x);
    if (nrm2 == 0.0) throw std::invalid_argument("feature_vector: all-zero string");
    const std::size_t ell = x.size();
    std::vector<double> v;
    v.reserve(ell * (ell + 1) / 2);
    for (std::size_t i = 0; i < ell; ++i) v.push_back(x[i] * x[i] / nrm2);
    for (std::size_t i = 0; i < ell; ++i)
        for (std::size_t j = i + 1; j < ell; ++j) v.push_back(2.0 * x[i] * x[j] / nrm2);
    return v;
}

FitResult fit_model(const std::vector<std::pair<std::vector<double>, double>>& samples,
                    double u_exp) {
    if (samples.empty()) throw std::invalid_argument("fit_model: no samples");
    const std::size_t ell = samples.front().first.size();
    const std::size_t dim = ell * (ell + 1) / 2;
    if (samples.size() < dim)
        throw std::invalid_argument("fit_model: need at least ell(ell+1)/2 samples");
    const double scale = std::pow(static_cast<double>(ell), u_exp + 1.0);

    Eigen::MatrixXd design(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(dim));
    Eigen::VectorXd target(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t r = 0; r < samples.size(); ++r) {
        if (samples[r].first.size() != ell)
            throw std::invalid_argument("fit_model: samples must share one length");
        const auto v = feature_vector(samples[r].first);
        for (std::size_t c = 0; c < dim; ++c)
            design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c];
        target(static_cast<Eigen::Index>(r)) = samples[r].second / scale;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(dim))
        throw std::invalid_argument("fit_model: rank-deficient design; add more diverse samples");
    const Eigen::VectorXd solution = qr.solve(target);

    FitResult out;
    out.model.ell = ell;
    out.model.u_exp = u_exp;
    out.model.coefficients.assign(solution.data(), solution.data() + solution.size());
    out.residual_norm = (design * solution - target).norm() * scale;
    return out;
}

double predict(const LearnedModel& model, const std::vector<double>& x) {
    if (x.size() != model.ell) throw std::invalid_argument("predict: length mismatch");
    const auto v = feature_vector(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * model.coefficients[i];
    return std::pow(static_cast<double>(model.ell), model.u_exp + 1.0) * acc;
}

u64 sample_budget_all_lengths(int ell) {
    if (ell < 1) throw std::invalid_argument("sample_budget_all_lengths: ell must be >= 1");
    u64 acc = 0;
    for (u64 i = 1; i <= static_cast<u64>(ell); ++i) acc += i * i;
    return acc;
}

}  // namespace primelearn::qlearn
