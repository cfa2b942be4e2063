#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "primelearn/cli.hpp"
#include "primelearn/oracles.hpp"
#include "primelearn/report.hpp"

using namespace primelearn;
using namespace primelearn::cli;

TEST_CASE("bad flags exit with code 1") {
    CHECK(run_command({"no-such-command"}).exit_code == kExitBadFlags);
    CHECK(run_command({"verify-sampler", "--bogus-flag", "3"}).exit_code == kExitBadFlags);
    CHECK(run_command({}).exit_code == kExitBadFlags);
}

TEST_CASE("precondition violations exit with code 2") {
    CHECK(run_command({"gen-dataset", "--m", "8", "--K", "2", "--n", "0"}).exit_code ==
          kExitPrecondition);
    CHECK(run_command({"gen-dataset", "--m", "3", "--K", "2", "--n", "5"}).exit_code ==
          kExitPrecondition);  // m below the class threshold
    CHECK(run_command({"estimator-calib", "--trials", "0"}).exit_code == kExitPrecondition);
}

TEST_CASE("threshold violations exit with code 3") {
    // 60 draws cannot track the exact pmf within 0.03 total variation.
    const auto r = run_command({"--seed", "5", "verify-sampler", "--m", "8", "--K", "2",
                                "--draws", "60"});
    CHECK(r.exit_code == kExitThreshold);
    CHECK(r.report.metrics.at("support_exact").get<bool>());
}

TEST_CASE("gen-dataset writes the requested format") {
    const std::string path = "cli_test_dataset.csv";
    const auto r = run_command({"--seed", "11", "gen-dataset", "--m", "8", "--K", "2", "--n",
                                "20", "--fn", "f2", "--out", path, "--format", "csv"});
    REQUIRE(r.exit_code == kExitOk);
    std::ifstream in(path);
    REQUIRE(in.good());
    const auto ts = oracles::TrainingSet::from_csv(in);
    CHECK(ts.pairs.size() == 20);
    for (const auto& p : ts.pairs) CHECK(p.x % u128_from_string(p.y.exact) == 0);
    std::remove(path.c_str());
}

TEST_CASE("identical flags and seed reproduce the metric block byte for byte") {
    // verify-lemma3 may exit 3 (its band gate is strict); determinism must
    // hold either way.
    const std::vector<std::string> args = {"--seed", "21", "verify-lemma3", "--pairs", "6"};
    const auto a = run_command(args);
    const auto b = run_command(args);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.report.metrics_block() == b.report.metrics_block());

    const std::vector<std::string> gen = {"--seed", "13", "gen-dataset", "--m", "8", "--K", "2",
                                          "--n",    "15", "--fn",        "f1"};
    CHECK(run_command(gen).report.metrics_block() == run_command(gen).report.metrics_block());
}

TEST_CASE("reports round trip through disk and fail loudly on bad paths") {
    const auto r = run_command({"--seed", "3", "verify-lemma3", "--pairs", "4"});
    REQUIRE_FALSE(r.report.command.empty());  // report produced regardless of the gate
    const std::string path = "cli_test_report.json";
    report::write_report(r.report, path);
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto parsed = nlohmann::ordered_json::parse(buffer.str());
    CHECK(parsed.at("schema").get<int>() == 1);
    CHECK(parsed.at("command").get<std::string>() == "verify-lemma3");
    CHECK(parsed.at("metrics").dump() == r.report.metrics.dump());
    std::remove(path.c_str());

    try {
        report::write_report(r.report, "no/such/dir/report.json");
        FAIL("expected an I/O failure");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("no/such/dir/report.json") != std::string::npos);
    }
}

TEST_CASE("small factor sweep through the CLI") {
    const auto r = run_command({"--seed", "2", "factor-sweep", "--max-x", "512", "--oracle",
                                "worst-case", "--c", "1", "--u", "0", "--fn", "f1"});
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.report.metrics.at("success_rate").get<std::string>() == "1");

    // The product/radical pairing drives the same sweep.
    const auto r2 = run_command({"--seed", "2", "factor-sweep", "--max-x", "256", "--oracle",
                                 "exact", "--fn", "f2"});
    REQUIRE(r2.exit_code == kExitOk);
    CHECK(r2.report.metrics.at("success_rate").get<std::string>() == "1");
}

TEST_CASE("learner demo through the CLI") {
    const auto exact = run_command({"--seed", "6", "qlearn-demo", "--ell", "3", "--labels", "exact"});
    REQUIRE(exact.exit_code == kExitOk);
    CHECK(std::stod(exact.report.metrics.at("heldout_max_error").get<std::string>()) <= 1e-8);
    CHECK(exact.report.metrics.at("length_budget_matches_closed_form").get<bool>());

    // Estimated labels: error is reported, not gated.
    const auto est = run_command({"--seed", "6", "qlearn-demo", "--ell", "3", "--labels",
                                  "estimated", "--c", "0.2", "--delta", "0.1"});
    REQUIRE(est.exit_code == kExitOk);
    CHECK(std::stod(est.report.metrics.at("heldout_max_error").get<std::string>()) < 10.0);
}
