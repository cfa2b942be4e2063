#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "doctest.h"
#include "primelearn/qlearn.hpp"

using namespace primelearn;
using namespace primelearn::qlearn;

namespace {

// Dense brute force: assemble the Hermitian form U^dag (Z (x) I...) U column
// by column and vectorize its top-left block. Oracle for the quadratic-form
// identity; independent of feature/fit code paths.
std::vector<double> dense_form_vector(const CircuitSpec& circuit, std::size_t ell) {
    const std::size_t n = std::size_t{1} << circuit.qubits;
    std::vector<std::vector<std::complex<double>>> columns(n);
    for (std::size_t j = 0; j < n; ++j) {
        StateVector basis;
        basis.amps.assign(n, {0.0, 0.0});
        basis.amps[j] = {1.0, 0.0};
        apply_circuit(basis, circuit);
        columns[j] = basis.amps;
    }
    const auto entry = [&](std::size_t i, std::size_t j) {
        std::complex<double> acc = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            const double z = b < n / 2 ? 1.0 : -1.0;
            acc += z * std::conj(columns[i][b]) * columns[j][b];
        }
        return acc;
    };
    std::vector<double> v;
    for (std::size_t i = 0; i < ell; ++i) v.push_back(entry(i, i).real());
    for (std::size_t i = 0; i < ell; ++i)
        for (std::size_t j = i + 1; j < ell; ++j) v.push_back(entry(i, j).real());
    return v;
}

std::vector<double> random_string(std::size_t ell, SplitRng& rng) {
    std::vector<double> x(ell);
    bool nonzero = false;
    while (!nonzero)
        for (auto& v : x) {
            v = static_cast<double>(rng.below(16));
            nonzero = nonzero || v != 0.0;
        }
    return x;
}

CircuitSpec identity_circuit(int k) {
    CircuitSpec spec;
    spec.qubits = k;
    return spec;
}

}  // namespace

TEST_CASE("circuit construction is deterministic, covering, and budgeted") {
    for (int k : {1, 3, 5}) {
        const auto a = build_circuit(k, 42);
        const auto b = build_circuit(k, 42);
        REQUIRE(a.gates.size() == b.gates.size());
        for (std::size_t i = 0; i < a.gates.size(); ++i) {
            CHECK(a.gates[i].kind == b.gates[i].kind);
            CHECK(a.gates[i].target == b.gates[i].target);
            CHECK(a.gates[i].control == b.gates[i].control);
        }
        CHECK(a.gates.size() <= static_cast<std::size_t>(20 * k * k));
        std::set<int> touched;
        for (const auto& g : a.gates) {
            touched.insert(g.target);
            CHECK(g.target < k);
            if (g.control >= 0) CHECK(g.control < k);
        }
        CHECK(touched.size() == static_cast<std::size_t>(k));
    }
    CHECK_THROWS_AS(build_circuit(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_circuit(13, 1), std::invalid_argument);
}

TEST_CASE("circuit JSON round trip") {
    const auto a = build_circuit(4, 7);
    const auto b = CircuitSpec::from_json(a.to_json());
    CHECK(b.qubits == a.qubits);
    CHECK(b.seed == a.seed);
    REQUIRE(b.gates.size() == a.gates.size());
    for (std::size_t i = 0; i < a.gates.size(); ++i) {
        CHECK(b.gates[i].kind == a.gates[i].kind);
        CHECK(b.gates[i].target == a.gates[i].target);
        CHECK(b.gates[i].control == a.gates[i].control);
    }
}

TEST_CASE("amplitude encoding") {
    auto s = encode_state({1.0});
    CHECK(s.amps[0] == std::complex<double>{1.0, 0.0});
    CHECK(s.norm() == doctest::Approx(1.0));

    s = encode_state({1.0, 1.0, 1.0, 1.0});
    for (int i = 0; i < 4; ++i) CHECK(s.amps[i].real() == doctest::Approx(0.5));

    s = encode_state({3.0, 4.0});
    CHECK(s.amps[0].real() == doctest::Approx(0.6));
    CHECK(s.amps[1].real() == doctest::Approx(0.8));

    CHECK_THROWS_AS(encode_state({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(encode_state({}), std::invalid_argument);
}

TEST_CASE("simulator preserves norms and simple gate identities") {
    SplitRng rng(12);
    for (int k : {1, 2, 4}) {
        const auto circuit = build_circuit(k, rng.next());
        auto state = encode_state(random_string(std::size_t{1} << k, rng));
        apply_circuit(state, circuit);
        CHECK(std::abs(state.norm() - 1.0) < 1e-10);

        // H twice and S four times are the identity.
        auto reference = encode_state(random_string(std::size_t{1} << k, rng));
        auto working = reference;
        const int wire = static_cast<int>(rng.below(static_cast<u64>(k)));
        apply_gate(working, {GateKind::H, wire, -1});
        apply_gate(working, {GateKind::H, wire, -1});
        for (int i = 0; i < 4; ++i) apply_gate(working, {GateKind::S, wire, -1});
        for (std::size_t i = 0; i < working.amps.size(); ++i)
            CHECK(std::abs(working.amps[i] - reference.amps[i]) < 1e-12);
    }
}

TEST_CASE("exact value on the identity circuit") {
    // Zero-gate circuits pin the expectation to the encoding itself.
    const CircuitFamily family(1);
    const auto identity = identity_circuit(2);
    auto s = encode_state({1.0, 0.0, 0.0, 0.0});
    apply_circuit(s, identity);
    CHECK(z_first_expectation(s) == doctest::Approx(1.0));
    s = encode_state({1.0, 1.0, 1.0, 1.0});
    CHECK(z_first_expectation(s) == doctest::Approx(0.0));
}

TEST_CASE("value scales exactly with the length power") {
    const CircuitFamily family(5);
    SplitRng rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto x = random_string(8, rng);
        const double v0 = exact_value(x, 0.0, family);
        const double v1 = exact_value(x, 1.0, family);
        CHECK(v1 == doctest::Approx(8.0 * v0));
        CHECK(std::abs(v0) <= 8.0 + 1e-12);
    }
}

TEST_CASE("quadratic-form identity against the dense brute force") {
    SplitRng rng(31);
    for (int k = 1; k <= 3; ++k) {
        const CircuitFamily family(derive_seed(100, "fam", static_cast<u64>(k)));
        const std::size_t ell = std::size_t{1} << k;
        const auto circuit = family.circuit_for_length(ell);
        const auto vm = dense_form_vector(circuit, ell);
        for (int i = 0; i < 25; ++i) {
            const auto x = random_string(ell, rng);
            const auto v = feature_vector(x);
            double quad = 0.0;
            for (std::size_t t = 0; t < v.size(); ++t) quad += v[t] * vm[t];
            CHECK(std::abs(exact_value(x, 0.0, family) - static_cast<double>(ell) * quad) < 1e-10);
        }
    }
}

TEST_CASE("shot budget closed form") {
    CHECK(shot_budget(4, 0.0, 0.1, 0.05) == 11805);
    CHECK(shot_budget(4, 0.0, 0.1, 0.1) == 9587);
}

TEST_CASE("estimator is exact on a measurement eigenstate") {
    SplitRng rng(2);
    // Identity circuit on the first basis state: every shot reports +1, so
    // the empirical mean equals the expectation with no sampling error.
    const auto x = std::vector<double>{1.0, 0.0, 0.0, 0.0};
    const auto identity = identity_circuit(2);
    for (int r = 0; r < 5; ++r) {
        const double estimate = estimate_with_circuit(x, 0.0, 0.5, 0.2, identity, rng);
        CHECK(estimate == 4.0);
    }
}

TEST_CASE("estimator hits the confidence target on the flat state") {
    // Equal-amplitude input under the identity has expectation 0; the Z
    // outcome is a fair coin, the hardest case for the tail bound.
    SplitRng rng(44);
    const std::size_t ell = 4;
    const double c = 0.1, delta = 0.05;
    const u64 shots = shot_budget(ell, 0.0, c, delta);
    int ok = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        u64 plus = 0;
        for (u64 s = 0; s < shots; ++s)
            if (rng.unit() < 0.5) ++plus;
        const double estimate =
            4.0 * (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) / static_cast<double>(shots);
        if (std::abs(estimate) < c) ++ok;
    }
    CHECK(ok >= static_cast<int>(reps * 0.93));
}

TEST_CASE("estimate_value agrees with exact_value within c almost always") {
    const CircuitFamily family(17);
    SplitRng rng(7);
    int ok = 0;
    const int reps = 50;
    for (int r = 0; r < reps; ++r) {
        const auto x = random_string(4, rng);
        const double exact = exact_value(x, 0.0, family);
        const double estimate = estimate_value(x, 0.0, 0.1, 0.05, family, rng);
        if (std::abs(estimate - exact) < 0.1) ++ok;
    }
    CHECK(ok >= 47);
}

TEST_CASE("feature vector layout") {
    CHECK(feature_vector({1.0, 1.0, 1.0}).size() == 6);
    const auto v = feature_vector({1.0, 0.0});
    CHECK(v == std::vector<double>{1.0, 0.0, 0.0});
    const auto w = feature_vector({3.0, 4.0});
    CHECK(w[0] == doctest::Approx(9.0 / 25.0));
    CHECK(w[1] == doctest::Approx(16.0 / 25.0));
    CHECK(w[2] == doctest::Approx(24.0 / 25.0));
}

TEST_CASE("least-squares recovery from exact labels") {
    const CircuitFamily family(23);
    SplitRng rng(8);
    const std::size_t ell = 4;
    const std::size_t dim = ell * (ell + 1) / 2;
    std::vector<std::pair<std::vector<double>, double>> train;
    for (std::size_t i = 0; i < dim + 5; ++i) {
        auto x = random_string(ell, rng);
        const double y = exact_value(x, 0.0, family);
        train.emplace_back(std::move(x), y);
    }
    const auto fit = fit_model(train, 0.0);
    CHECK(fit.residual_norm < 1e-9);
    double max_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto x = random_string(ell, rng);
        max_err = std::max(max_err, std::abs(predict(fit.model, x) - exact_value(x, 0.0, family)));
    }
    CHECK(max_err < 1e-8);

    // Training points interpolate too.
    for (const auto& [x, y] : train) CHECK(std::abs(predict(fit.model, x) - y) < 1e-8);
}

TEST_CASE("fit preconditions") {
    const CircuitFamily family(29);
    SplitRng rng(10);
    std::vector<std::pair<std::vector<double>, double>> too_few;
    for (int i = 0; i < 5; ++i) {
        auto x = random_string(3, rng);
        too_few.emplace_back(x, exact_value(x, 0.0, family));
    }
    CHECK_THROWS_AS(fit_model(too_few, 0.0), std::invalid_argument);  // dim = 6 > 5

    // Identical rows: rank deficient no matter how many samples.
    std::vector<std::pair<std::vector<double>, double>> degenerate;
    const auto x0 = random_string(3, rng);
    for (int i = 0; i < 12; ++i) degenerate.emplace_back(x0, exact_value(x0, 0.0, family));
    CHECK_THROWS_AS(fit_model(degenerate, 0.0), std::invalid_argument);
}

TEST_CASE("predictions are scale invariant and length checked") {
    const CircuitFamily family(31);
    SplitRng rng(11);
    const auto x = random_string(4, rng);
    std::vector<double> scaled = x;
    for (auto& v : scaled) v *= 2.5;
    CHECK(exact_value(x, 0.0, family) == doctest::Approx(exact_value(scaled, 0.0, family)));

    std::vector<std::pair<std::vector<double>, double>> train;
    for (std::size_t i = 0; i < 15; ++i) {
        auto xi = random_string(4, rng);
        train.emplace_back(xi, exact_value(xi, 0.0, family));
    }
    const auto fit = fit_model(train, 0.0);
    CHECK(predict(fit.model, x) == doctest::Approx(predict(fit.model, scaled)));
    CHECK_THROWS_AS(predict(fit.model, random_string(3, rng)), std::invalid_argument);
}

TEST_CASE("length budget bookkeeping") {
    for (int ell : {1, 4, 6, 10}) {
        const u64 direct = sample_budget_all_lengths(ell);
        const u64 closed = (2ULL * ell * ell * ell + 3ULL * ell * ell + ell) / 6ULL;
        CHECK(direct == closed);
    }
    CHECK(sample_budget_all_lengths(6) == 91);
}
