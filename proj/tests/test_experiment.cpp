#include "risemi/experiment.hpp"

#include "cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace risemi;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
    std::ostringstream o, e;
    const int rc = cli::cli_main(args, o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return rc;
}

TrialOutcome outcome(double sum, std::vector<double> rates) {
    TrialOutcome o;
    o.sum_rate_bps_hz = sum;
    o.rates = Eigen::Map<rvec>(rates.data(), static_cast<Eigen::Index>(rates.size()));
    return o;
}

SystemConfig tiny_config() {
    auto cfg = default_config();
    cfg.clusters[0].ris_side = 3;
    cfg.clusters[1].ris_side = 3;
    return validate_config(cfg);
}

const std::string kConfig = std::string(RISEMI_SOURCE_DIR) + "/configs/default.json";

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("aggregate") {
    const auto r = aggregate({outcome(1.0, {0.5, 0.5}), outcome(3.0, {1.5, 1.5})}, 0.1);
    CHECK(r.mean_sum_rate_bps_hz == 2.0);
    CHECK(r.valid);
    CHECK(r.sum_rate_std_error == doctest::Approx(1.0));

    const auto o = aggregate({outcome(0.05, {0.05}), outcome(0.2, {0.2})}, 0.1);
    CHECK(o.outage(0) == 0.5);

    TrialOutcome skip;
    skip.skipped = true;
    const auto s = aggregate({skip, outcome(1.0, {1.0})}, 0.1);
    CHECK(s.skipped == 1);
    CHECK(s.trials == 2);
    CHECK(s.mean_sum_rate_bps_hz == 1.0);
    CHECK(std::isnan(s.per_trial_sum_rate[0]));
    CHECK_THROWS_AS(aggregate({skip, skip}, 0.1), std::runtime_error);
}

TEST_CASE("scenario specs") {
    const auto s = ScenarioSpec::parse("EMI_IRR@-65");
    CHECK(s.kind == Scenario::EmiIrr);
    CHECK(*s.emi_dbm == -65.0);
    CHECK(s.label() == "EMI_IRR@-65");
    CHECK(ScenarioSpec::parse("IRR").label() == "IRR");
    CHECK_THROWS(ScenarioSpec::parse("IRR@-65"));
    CHECK_THROWS(ScenarioSpec::parse("EMI@loud"));
    CHECK(standard_scenarios().size() == 6);
    CHECK(parse_mode("optimized_aware") == Mode::OptimizedAware);
    CHECK_THROWS(parse_mode("greedy"));
}

TEST_CASE("EMI levels per scenario") {
    const auto cfg = tiny_config();
    const auto eif = emi_levels_for({Scenario::Eif, -60.0}, cfg);
    CHECK(eif.cluster1_w == 0.0);
    const auto emi = emi_levels_for({Scenario::Emi, -75.0}, cfg);
    CHECK(emi.cluster1_w == doctest::Approx(dbm_to_watts(-75)));
    CHECK(emi.cluster2_w == 0.0);
    const auto both = emi_levels_for({Scenario::EmiIrr, std::nullopt}, cfg, -60.0);
    CHECK(both.cluster1_w == doctest::Approx(dbm_to_watts(-60)));
    CHECK(both.cluster2_w == doctest::Approx(dbm_to_watts(-60)));
    const auto fallback = emi_levels_for({Scenario::Emi, std::nullopt}, cfg);
    CHECK(fallback.cluster1_w == doctest::Approx(dbm_to_watts(-65)));
}

TEST_CASE("sweep value application") {
    const auto cfg = tiny_config();
    CHECK(apply_sweep_value(cfg, SweepVariable::RisElements, 225).clusters[0].ris_side == 15);
    CHECK_THROWS_AS(apply_sweep_value(cfg, SweepVariable::RisElements, 200), std::invalid_argument);
    CHECK(apply_sweep_value(cfg, SweepVariable::TxPower, 12.0).clusters[0].tx_power_dbm == 12.0);
}

TEST_CASE("power sweep shape, skip accounting and determinism") {
    SweepSpec spec;
    spec.grid = {10, 30};
    spec.scenarios = standard_scenarios();
    spec.trials = 4;
    const auto cfg = tiny_config();
    const auto a = run_sweep(spec, cfg);
    CHECK(a.records.size() == 12);
    for (const auto& r : a.records) {
        CHECK(r.trials == 4);
        CHECK(r.outage.minCoeff() >= 0.0);
        CHECK(r.outage.maxCoeff() <= 1.0);
    }
    spec.threads = 3;
    const auto b = run_sweep(spec, cfg);
    std::ostringstream ca, cb;
    write_csv(ca, a.records);
    write_csv(cb, b.records);
    CHECK(ca.str() == cb.str());
    CHECK(ca.str().rfind(std::string(kCsvHeader) + "\n", 0) == 0);
}

TEST_CASE("optimised sweep with trace") {
    SweepSpec spec;
    spec.variable = SweepVariable::EmiPower;
    spec.grid = {-70};
    spec.scenarios = {{Scenario::Emi, std::nullopt}};
    spec.modes = {Mode::FixedPhase, Mode::OptimizedUnaware, Mode::OptimizedAware};
    spec.trials = 2;
    spec.collect_trace = true;
    const auto r = run_sweep(spec, tiny_config());
    REQUIRE(r.records.size() == 3);
    CHECK(r.records[0].scenario == "EMI");
    CHECK(r.records[1].mean_sum_rate_bps_hz > r.records[0].mean_sum_rate_bps_hz);
    CHECK_FALSE(r.trace.empty());
    CHECK(r.trace.front().trial == 0);
    CHECK(r.trace.back().trial == 1);
}

TEST_CASE("CLI contract") {
    std::string out, err;
    CHECK(run_cli({"sweep-power", "--trials", "2"}, &out, &err) == 1);
    CHECK(err.find("--config") != std::string::npos);
    CHECK(run_cli({"sweep-power", "--config", kConfig, "--bogus"}, &out, &err) == 1);
    CHECK(run_cli({"sweep-power", "--config", "/nonexistent.json", "--trials", "1"}, &out, &err) == 2);
    CHECK(run_cli({"sweep-power", "--config", kConfig, "--mode", "greedy"}, &out, &err) == 1);
    CHECK(run_cli({"sweep-elements", "--config", kConfig, "--grid", "10", "--trials", "1"}, &out, &err) == 2);
    CHECK(run_cli({}, &out, &err) == 1);

    const auto dir = std::filesystem::temp_directory_path() / "risemi_cli_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::vector<std::string> base{"sweep-power", "--config", kConfig, "--trials", "2", "--seed", "7",
                                        "--grid",      "0,30",   "--scenario", "EIF,EMI@-65"};
    auto args = base;
    args.insert(args.end(), {"--out", (dir / "a.csv").string(), "--dump-channels", (dir / "ch").string()});
    CHECK(run_cli(args, &out, &err) == 0);
    args = base;
    args.insert(args.end(), {"--out", (dir / "b.csv").string()});
    CHECK(run_cli(args, &out, &err) == 0);
    const auto a = slurp(dir / "a.csv");
    CHECK(a == slurp(dir / "b.csv"));
    CHECK(a.rfind("sweep_value,scenario,mode,mean_sum_rate_bps_hz,outage_user1,trials,skipped\n", 0) == 0);
    CHECK(std::filesystem::exists(dir / "ch" / "Z21.csv"));

    std::string s1, s2;
    CHECK(run_cli({"single-trial", "--seed", "7"}, &s1) == 0);
    CHECK(run_cli({"single-trial", "--seed", "7"}, &s2) == 0);
    CHECK(s1 == s2);
    CHECK(s1.find("EMI_IRR@-65,fixed_phase") != std::string::npos);
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
