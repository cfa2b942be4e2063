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

#include "primelearn/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "primelearn/numtheory.hpp"
#include "primelearn/oracles.hpp"
#include "primelearn/qlearn.hpp"
#include "primelearn/reductions.hpp"
#include "primelearn/sampler.hpp"

namespace primelearn::cli {

namespace {

using report::ExperimentReport;
using report::metric_real;

struct CommonFlags {
    u64 seed = 0;
    std::string out;
};

u64 env_seed_fallback() {
    if (const char* env = std::getenv("PRIMELEARN_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

/// All two-prime values up to limit, ascending.
std::vector<u64> two_prime_values(u64 limit) {
    const auto counts = numtheory::distinct_factor_counts(limit);
    std::vector<u64> out;
    for (u64 x = 2; x <= limit; ++x)
        if (counts[x] == 2) out.push_back(x);
    return out;
}

std::vector<double> random_symbol_string(std::size_t ell, u64 alphabet, SplitRng& rng) {
    std::vector<double> x(ell);
    while (true) {
        bool nonzero = false;
        for (auto& v : x) {
            v = static_cast<double>(rng.below(alphabet));
            nonzero = nonzero || v != 0.0;
        }
        if (nonzero) return x;
    }
}

// ---- subcommand bodies ------------------------------------------------

int run_gen_dataset(ExperimentReport& rep, const CommonFlags& common, int m, int K, u64 n,
                    const std::string& fn, const std::string& mode, double c, double u,
                    double delta, const std::string& format) {
    sampler::SamplerConfig cfg;
    cfg.m = m;
    cfg.K = K;
    cfg.seed = common.seed;
    oracles::OracleModel oracle;
    oracle.fn = numtheory::function_id_from_string(fn);
    oracle.mode = oracles::oracle_mode_from_string(mode);
    oracle.c = c;
    oracle.u = u;
    oracle.delta = delta;
    oracle.seed = derive_seed(common.seed, "oracle");

    SplitRng rng(derive_seed(common.seed, "dataset"));
    const auto ts = oracles::emit_training_set(cfg, oracle, n, rng);

    const std::string payload = format == "csv" ? ts.to_csv() : ts.to_json();
    if (!common.out.empty()) {
        std::ofstream file(common.out);
        if (!file) throw std::runtime_error("gen-dataset: cannot open " + common.out);
        file << payload;
    }

    u64 distinct = 0;
    std::map<u128, u64> seen;
    for (const auto& p : ts.pairs)
        if (++seen[p.x] == 1) ++distinct;
    rep.metrics["n"] = n;
    rep.metrics["distinct_x"] = distinct;
    rep.metrics["first_pair"] = ts.pairs.empty()
                                    ? ""
                                    : u128_to_string(ts.pairs.front().x) + "," + ts.pairs.front().y.decimal();
    for (const auto& p : ts.pairs) {
        rep.trials.push_back({u128_to_string(p.x), p.y.decimal()});
    }
    return kExitOk;
}

int run_factor_sweep(ExperimentReport& rep, const CommonFlags& common, u64 max_x,
                     const std::string& fn, const std::string& mode, double c, double u,
                     double delta, u64 draws) {
    if (max_x < 6 || max_x > (u64{1} << 22))
        throw std::invalid_argument("factor-sweep: --max-x must be in [6, 2^22]");
    const auto oracle_mode = oracles::oracle_mode_from_string(mode);
    const auto function = numtheory::function_id_from_string(fn);

    oracles::OracleModel o1{numtheory::FunctionId::F1, oracle_mode, c, u, delta,
                            derive_seed(common.seed, "oracle-f1")};
    oracles::OracleModel o2{numtheory::FunctionId::F2, oracle_mode, c, u, delta,
                            derive_seed(common.seed, "oracle-f2")};
    oracles::OracleModel o3{numtheory::FunctionId::F3, oracle_mode, c, u, delta,
                            derive_seed(common.seed, "oracle-f3")};
    const bool use_f1 = function == numtheory::FunctionId::F1;

    const auto targets = two_prime_values(max_x);
    std::vector<u64> chosen;
    const bool randomized = oracle_mode == oracles::OracleMode::Failing;
    if (randomized) {
        SplitRng rng(derive_seed(common.seed, "sweep-draws"));
        for (u64 i = 0; i < draws; ++i) chosen.push_back(targets[rng.below(targets.size())]);
    } else {
        chosen = targets;
    }

    u64 successes = 0, max_candidates = 0, max_iterations = 0;
    for (u64 x : chosen) {
        reductions::ReductionResult r;
        if (randomized) {
            r = use_f1 ? reductions::factor_via_f1_with_retries(x, o1, 3)
                       : reductions::factor_via_f2_f3_with_retries(x, o2, o3, 3);
        } else {
            r = use_f1 ? reductions::factor_via_f1(x, o1) : reductions::factor_via_f2_f3(x, o2, o3);
        }
        if (r.factor) ++successes;
        max_candidates = std::max(max_candidates, r.candidates_tried);
        max_iterations = std::max(max_iterations, r.elapsed_iterations);
    }
    const double rate = chosen.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(chosen.size());
    const double required = randomized ? 0.95 : 1.0;
    rep.metrics["inputs"] = chosen.size();
    rep.metrics["successes"] = successes;
    rep.metrics["success_rate"] = metric_real(rate);
    rep.metrics["required_rate"] = metric_real(required);
    rep.metrics["max_candidates_tried"] = max_candidates;
    rep.metrics["max_inner_iterations"] = max_iterations;
    return rate >= required ? kExitOk : kExitThreshold;
}

int run_verify_sampler(ExperimentReport& rep, const CommonFlags& common, int m, int K, u64 draws) {
    sampler::SamplerConfig cfg;
    cfg.m = m;
    cfg.K = K;
    cfg.seed = common.seed;
    const auto exact = sampler::exact_pmf(cfg);
    sampler::TrainingSampler s(cfg);
    SplitRng rng(derive_seed(common.seed, "sampler-draws"));
    std::map<u64, u64> counts;
    u64 rejections = 0;
    for (u64 i = 0; i < draws; ++i) {
        const auto rec = s.sample(rng);
        ++counts[static_cast<u64>(rec.x.value)];
        rejections += static_cast<u64>(rec.rejections);
    }
    const double tv = sampler::total_variation(counts, draws, exact.pmf);

    // Support covers exactly {x <= 2^m : 1 <= omega(x) <= K}.
    const auto omega_counts = numtheory::distinct_factor_counts(u64{1} << m);
    bool support_exact = true;
    u64 support_size = 0;
    for (u64 x = 2; x <= (u64{1} << m); ++x) {
        const bool in_domain = omega_counts[x] >= 1 && omega_counts[x] <= K;
        if (in_domain) ++support_size;
        const auto it = exact.pmf.find(x);
        const bool has_mass = it != exact.pmf.end() && it->second > 0.0;
        if (in_domain != has_mass) support_exact = false;
    }
    double min_ratio_vs_uniform = 0.0;
    if (support_exact && support_size > 0) {
        min_ratio_vs_uniform = 2.0;  // any value > 1 gets replaced below
        for (const auto& [x, p] : exact.pmf)
            min_ratio_vs_uniform = std::min(min_ratio_vs_uniform, p * static_cast<double>(support_size));
    }
    const double rejection_rate =
        static_cast<double>(rejections) / static_cast<double>(draws + rejections);

    rep.metrics["draws"] = draws;
    rep.metrics["tv_distance"] = metric_real(tv);
    rep.metrics["support_exact"] = support_exact;
    rep.metrics["support_size"] = support_size;
    rep.metrics["min_ratio_vs_uniform"] = metric_real(min_ratio_vs_uniform);
    rep.metrics["empirical_rejection_rate"] = metric_real(rejection_rate);
    rep.metrics["exact_rejection_probability"] = metric_real(exact.rejection_probability);

    const bool ok = tv <= 0.03 && support_exact && min_ratio_vs_uniform > 0.0;
    return ok ? kExitOk : kExitThreshold;
}

int run_verify_lemma3(ExperimentReport& rep, const CommonFlags& common, int pairs) {
    if (pairs < 1) throw std::invalid_argument("verify-lemma3: --pairs must be >= 1");
    SplitRng rng(derive_seed(common.seed, "prime-pairs"));
    const auto pool = numtheory::primes_up_to(255);
    const std::vector<int> scales = {16, 24, 32, 48};
    int closer = 0;
    bool mid_in_band = true;
    for (int i = 0; i < pairs; ++i) {
        u64 p = pool[rng.below(pool.size())], q = pool[rng.below(pool.size())];
        while (q == p) q = pool[rng.below(pool.size())];
        if (p > q) std::swap(p, q);
        nlohmann::ordered_json row;
        row["p1"] = p;
        row["p2"] = q;
        double ratio16 = 0.0, ratio48 = 0.0;
        for (int m : scales) {
            const auto mc = numtheory::count_multiplicity_vectors({p, q}, m);
            const double ratio = static_cast<double>(mc.count) / mc.volume;
            row["ratio_m" + std::to_string(m)] = metric_real(ratio);
            if (m == 16) ratio16 = ratio;
            if (m == 48) ratio48 = ratio;
            if (m == 24 && (ratio < 0.5 || ratio > 2.0)) mid_in_band = false;
        }
        if (std::abs(ratio48 - 1.0) < std::abs(ratio16 - 1.0)) ++closer;
        rep.trials.push_back(std::move(row));
    }
    const double closer_fraction = static_cast<double>(closer) / static_cast<double>(pairs);
    rep.metrics["pairs"] = pairs;
    rep.metrics["ratio_in_band_at_m24"] = mid_in_band;
    rep.metrics["closer_to_one_fraction"] = metric_real(closer_fraction);
    const bool ok = mid_in_band && closer_fraction >= 0.8;
    return ok ? kExitOk : kExitThreshold;
}

int run_qlearn_demo(ExperimentReport& rep, const CommonFlags& common, int ell, u64 n,
                    const std::string& labels, double c, double u, double delta) {
    if (ell < 1 || ell > 64) throw std::invalid_argument("qlearn-demo: --ell must be in [1, 64]");
    const qlearn::CircuitFamily family(derive_seed(common.seed, "circuits"));
    const std::size_t dim = static_cast<std::size_t>(ell) * (ell + 1) / 2;
    if (n == 0) n = dim + 5;
    const bool estimated = labels == "estimated";
    if (!estimated && labels != "exact")
        throw std::invalid_argument("qlearn-demo: --labels must be exact or estimated");

    SplitRng rng(derive_seed(common.seed, "qlearn-train"));
    std::vector<std::pair<std::vector<double>, double>> train;
    for (u64 i = 0; i < n; ++i) {
        auto x = random_symbol_string(static_cast<std::size_t>(ell), 16, rng);
        const double y = estimated ? qlearn::estimate_value(x, u, c, delta, family, rng)
                                   : qlearn::exact_value(x, u, family);
        train.emplace_back(std::move(x), y);
    }
    const auto fit = qlearn::fit_model(train, u);

    SplitRng heldout_rng(derive_seed(common.seed, "qlearn-heldout"));
    double max_error = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto x = random_symbol_string(static_cast<std::size_t>(ell), 16, heldout_rng);
        max_error = std::max(max_error,
                             std::abs(qlearn::predict(fit.model, x) - qlearn::exact_value(x, u, family)));
    }

    const u64 budget = qlearn::sample_budget_all_lengths(ell);
    const u64 closed_form = (2ULL * ell * ell * ell + 3ULL * ell * ell + ell) / 6ULL;
    rep.metrics["n"] = n;
    rep.metrics["dimension"] = dim;
    rep.metrics["labels"] = labels;
    rep.metrics["residual_norm"] = metric_real(fit.residual_norm);
    rep.metrics["heldout_max_error"] = metric_real(max_error);
    rep.metrics["length_budget_matches_closed_form"] = budget == closed_form;
    rep.metrics["length_budget"] = budget;

    if (!estimated && max_error > 1e-8) return kExitThreshold;
    return kExitOk;
}

int run_estimator_calib(ExperimentReport& rep, const CommonFlags& common, int ell, double c,
                        double delta, u64 trials, double u) {
    if (ell < 1 || ell > 64) throw std::invalid_argument("estimator-calib: --ell must be in [1, 64]");
    if (trials < 1) throw std::invalid_argument("estimator-calib: --trials must be >= 1");
    const qlearn::CircuitFamily family(derive_seed(common.seed, "circuits"));
    u64 failures = 0;
    for (u64 t = 0; t < trials; ++t) {
        SplitRng rng(derive_seed(common.seed, "calib-trial", t));
        const auto x = random_symbol_string(static_cast<std::size_t>(ell), 16, rng);
        const double exact = qlearn::exact_value(x, u, family);
        const double estimate = qlearn::estimate_value(x, u, c, delta, family, rng);
        if (std::abs(estimate - exact) >= c) ++failures;
    }
    const double rate = static_cast<double>(failures) / static_cast<double>(trials);
    const double sigma = std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
    const double threshold = delta + 3.0 * sigma;
    rep.metrics["trials"] = trials;
    rep.metrics["shots_per_estimate"] = qlearn::shot_budget(static_cast<std::size_t>(ell), u, c, delta);
    rep.metrics["failure_rate"] = metric_real(rate);
    rep.metrics["failure_threshold"] = metric_real(threshold);
    return rate <= threshold ? kExitOk : kExitThreshold;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv) {
    CommandResult result;
    CLI::App app{"primelearn experiment driver"};
    app.require_subcommand(1);

    CommonFlags common;
    common.seed = env_seed_fallback();
    app.add_option("--seed", common.seed, "master seed; all randomness derives from it");

    // gen-dataset
    auto* gen = app.add_subcommand("gen-dataset", "sample a labeled training set");
    gen->fallthrough();
    int gd_m = 8, gd_K = 2;
    u64 gd_n = 100;
    std::string gd_fn = "f1", gd_mode = "exact", gd_format = "csv";
    double gd_c = 1.0, gd_u = 0.0, gd_delta = 0.0;
    gen->add_option("--m", gd_m, "bit budget");
    gen->add_option("--K", gd_K, "max distinct primes");
    gen->add_option("--n", gd_n, "number of pairs");
    gen->add_option("--fn", gd_fn)->check(CLI::IsMember({"f1", "f2", "f3"}));
    gen->add_option("--oracle", gd_mode)->check(CLI::IsMember({"exact", "worst-case", "uniform", "failing"}));
    gen->add_option("--c", gd_c);
    gen->add_option("--u", gd_u);
    gen->add_option("--delta", gd_delta);
    gen->add_option("--out", common.out, "output file path");
    gen->add_option("--format", gd_format)->check(CLI::IsMember({"csv", "json"}));

    // factor-sweep
    auto* sweep = app.add_subcommand("factor-sweep", "run the oracle reductions over two-prime inputs");
    sweep->fallthrough();
    u64 fs_max_x = 16384, fs_draws = 500;
    std::string fs_fn = "f1", fs_mode = "worst-case";
    double fs_c = 1.0, fs_u = 0.0, fs_delta = 0.3;
    sweep->add_option("--max-x", fs_max_x, "upper bound for inputs");
    sweep->add_option("--fn", fs_fn)->check(CLI::IsMember({"f1", "f2", "f3"}));
    sweep->add_option("--oracle", fs_mode)->check(CLI::IsMember({"exact", "worst-case", "uniform", "failing"}));
    sweep->add_option("--c", fs_c);
    sweep->add_option("--u", fs_u);
    sweep->add_option("--delta", fs_delta);
    sweep->add_option("--draws", fs_draws, "trial count for the failing-oracle mode");
    sweep->add_option("--out", common.out);

    // verify-sampler
    auto* vs = app.add_subcommand("verify-sampler", "empirical vs exact pmf of the training sampler");
    vs->fallthrough();
    int vs_m = 8, vs_K = 2;
    u64 vs_draws = 200000;
    vs->add_option("--m", vs_m);
    vs->add_option("--K", vs_K);
    vs->add_option("--draws", vs_draws);
    vs->add_option("--out", common.out);

    // verify-lemma3
    auto* vl = app.add_subcommand("verify-lemma3", "multiplicity count vs volume approximation");
    vl->fallthrough();
    int vl_pairs = 20;
    vl->add_option("--pairs", vl_pairs);
    vl->add_option("--out", common.out);

    // qlearn-demo
    auto* qd = app.add_subcommand("qlearn-demo", "least-squares recovery of the circuit function");
    qd->fallthrough();
    int qd_ell = 6;
    u64 qd_n = 0;
    std::string qd_labels = "exact";
    double qd_c = 0.1, qd_u = 0.0, qd_delta = 0.05;
    qd->add_option("--ell", qd_ell, "input string length");
    qd->add_option("--n", qd_n, "training samples (default dim + 5)");
    qd->add_option("--labels", qd_labels)->check(CLI::IsMember({"exact", "estimated"}));
    qd->add_option("--c", qd_c);
    qd->add_option("--u", qd_u);
    qd->add_option("--delta", qd_delta);
    qd->add_option("--out", common.out);

    // estimator-calib
    auto* ec = app.add_subcommand("estimator-calib", "measurement-estimator confidence check");
    ec->fallthrough();
    int ec_ell = 4;
    u64 ec_trials = 500;
    double ec_c = 0.1, ec_u = 0.0, ec_delta = 0.1;
    ec->add_option("--ell", ec_ell);
    ec->add_option("--c", ec_c);
    ec->add_option("--u", ec_u);
    ec->add_option("--delta", ec_delta);
    ec->add_option("--trials", ec_trials);
    ec->add_option("--out", common.out);

    std::vector<std::string> args(argv.rbegin(), argv.rend());  // CLI11 wants reversed
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        result.exit_code = kExitBadFlags;
        result.error = e.what();
        return result;
    }

    ExperimentReport rep;
    const auto started = std::chrono::steady_clock::now();
    try {
        if (gen->parsed()) {
            rep.command = "gen-dataset";
            rep.config = {{"m", gd_m},     {"K", gd_K},         {"n", gd_n},
                          {"fn", gd_fn},   {"oracle", gd_mode}, {"c", metric_real(gd_c)},
                          {"u", metric_real(gd_u)}, {"delta", metric_real(gd_delta)},
                          {"format", gd_format},    {"seed", common.seed}};
            result.exit_code = run_gen_dataset(rep, common, gd_m, gd_K, gd_n, gd_fn, gd_mode, gd_c,
                                               gd_u, gd_delta, gd_format);
        } else if (sweep->parsed()) {
            rep.command = "factor-sweep";
            rep.config = {{"max_x", fs_max_x}, {"fn", fs_fn},   {"oracle", fs_mode},
                          {"c", metric_real(fs_c)}, {"u", metric_real(fs_u)},
                          {"delta", metric_real(fs_delta)},     {"draws", fs_draws},
                          {"seed", common.seed}};
            result.exit_code =
                run_factor_sweep(rep, common, fs_max_x, fs_fn, fs_mode, fs_c, fs_u, fs_delta, fs_draws);
        } else if (vs->parsed()) {
            rep.command = "verify-sampler";
            rep.config = {{"m", vs_m}, {"K", vs_K}, {"draws", vs_draws}, {"seed", common.seed}};
            result.exit_code = run_verify_sampler(rep, common, vs_m, vs_K, vs_draws);
        } else if (vl->parsed()) {
            rep.command = "verify-lemma3";
            rep.config = {{"pairs", vl_pairs}, {"seed", common.seed}};
            result.exit_code = run_verify_lemma3(rep, common, vl_pairs);
        } else if (qd->parsed()) {
            rep.command = "qlearn-demo";
            rep.config = {{"ell", qd_ell}, {"n", qd_n}, {"labels", qd_labels},
                          {"c", metric_real(qd_c)}, {"u", metric_real(qd_u)},
                          {"delta", metric_real(qd_delta)}, {"seed", common.seed}};
            result.exit_code = run_qlearn_demo(rep, common, qd_ell, qd_n, qd_labels, qd_c, qd_u, qd_delta);
        } else if (ec->parsed()) {
            rep.command = "estimator-calib";
            rep.config = {{"ell", ec_ell}, {"c", metric_real(ec_c)}, {"u", metric_real(ec_u)},
                          {"delta", metric_real(ec_delta)}, {"trials", ec_trials},
                          {"seed", common.seed}};
            result.exit_code = run_estimator_calib(rep, common, ec_ell, ec_c, ec_delta, ec_trials, ec_u);
        }
    } catch (const std::invalid_argument& e) {
        result.exit_code = kExitPrecondition;
        result.error = e.what();
        return result;
    } catch (const std::exception& e) {
        result.exit_code = kExitBadFlags;
        result.error = e.what();
        return result;
    }
    rep.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (!common.out.empty() && rep.command != "gen-dataset") {
        try {
            report::write_report(rep, common.out);
        } catch (const std::exception& e) {
            result.exit_code = kExitBadFlags;
            result.error = e.what();
            return result;
        }
    }
    result.report = std::move(rep);
    return result;
}

}  // namespace primelearn::cli
