#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "doctest.h"
#include "saradon/error.hpp"
#include "saradon/experiment.hpp"
#include "saradon/io.hpp"
#include "saradon/projection.hpp"
#include "saradon/recon.hpp"

using namespace saradon;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(int trials = 40) {
    ExperimentConfig c = ExperimentConfig::table1_defaults();
    c.trials = trials;
    return c;
}

fs::path temp_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("saradon_exp_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("default sweep config is valid") {
    const ExperimentConfig c = ExperimentConfig::table1_defaults();
    CHECK_NOTHROW(c.validate());
    CHECK(c.snr_list.size() == 6);
    CHECK(c.alpha_for(30) == 2e-3);
    CHECK(c.alpha_for(55) == 9.4e-8);
    CHECK(c.trials == 1000);
}

TEST_CASE("config validation errors") {
    ExperimentConfig c = small_config();
    c.snr_list.push_back(60);
    try {
        c.validate();
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
        CHECK(std::string(e.what()).find("60") != std::string::npos);
    }
    CHECK_THROWS_AS(run_table1(c), Error);

    c = small_config();
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = small_config();
    c.coefficients.kind = CoefficientSource::Kind::fixed;
    c.coefficients.values = {1, 2, 3};
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("seed derivation") {
    CHECK(mix_seed(0) == 0xe220a8397b1dcdafULL);  // splitmix64 first output for state 0
    std::set<std::uint64_t> seen;
    for (std::size_t s = 0; s < 6; ++s)
        for (std::size_t t = 0; t < 200; ++t) seen.insert(trial_seed(1, s, t));
    CHECK(seen.size() == 1200);
    CHECK(trial_seed(1, 0, 0) != trial_seed(2, 0, 0));
}

TEST_CASE("make_coefficients") {
    ExperimentConfig c = small_config();
    const CoefficientGrid a = make_coefficients(c);
    CHECK(a.values.size() == 25);
    for (double v : a.values) CHECK((v >= 0.0 && v <= 1.0));
    CHECK(make_coefficients(c).values == a.values);
    c.coefficients.seed += 1;
    CHECK(make_coefficients(c).values != a.values);
    c.coefficients.kind = CoefficientSource::Kind::fixed;
    c.coefficients.values.assign(25, 0.5);
    CHECK(make_coefficients(c).values == c.coefficients.values);
}

TEST_CASE("run_table1 determinism and jobs invariance") {
    const ExperimentConfig c = small_config(37);
    ExperimentResult a = run_table1(c, 1);
    ExperimentResult b = run_table1(c, 1);
    ExperimentResult p = run_table1(c, 8);
    REQUIRE(a.records.size() == 6);
    for (auto* r : {&a, &b, &p})
        for (auto& rec : r->records) rec.seconds = 0.0;
    CHECK(a == b);
    CHECK(a == p);
    CHECK(result_csv(a) == result_csv(p));
    CHECK(a.config_hash == config_hash(c));
    CHECK(a.seed == 1);

    ExperimentConfig other = c;
    other.seed = 2;
    ExperimentResult q = run_table1(other, 2);
    CHECK(q.records[0].mean_error != a.records[0].mean_error);
}

TEST_CASE("run_table1 single trial matches a manual pipeline") {
    ExperimentConfig c = small_config(1);
    c.snr_list = {40};
    c.alpha_map = {{40, 1e-5}};
    const ExperimentResult r = run_table1(c);
    REQUIRE(r.records.size() == 1);

    const CoefficientGrid truth = make_coefficients(c);
    const BoxSplineGenerator g = c.generator;
    const ProjectionVector proj = ProjectionVector::from_angle(c.theta);
    const RadonProfile prof(g, proj);
    GramSystem sys = build_gram_system(prof, truth.region);
    const Eigen::VectorXd y = sample_radon(truth, g, proj, sys.nodes);
    std::mt19937_64 rng(trial_seed(c.seed, 0, 0));
    sys.rhs = add_noise(y, 40, rng);
    const Eigen::VectorXd x = tikhonov_solve(sys, 1e-5);
    const CoefficientGrid rec(truth.region, std::vector<double>(x.data(), x.data() + x.size()));
    const double err = error_metric(synthesize(rec, g, c.grid), synthesize(truth, g, c.grid));
    CHECK(r.records[0].mean_error == doctest::Approx(err).epsilon(1e-12));
    CHECK(r.records[0].mean_trial_error == doctest::Approx(err).epsilon(1e-12));
    CHECK(r.records[0].std_error == 0.0);
    CHECK(r.records[0].condition == doctest::Approx(sys.condition_estimate).epsilon(1e-12));
}

TEST_CASE("noiseless limit recovers the truth") {
    ExperimentConfig c = small_config(3);
    c.snr_list = {300};
    c.alpha_map = {{300, 0.0}};
    const ExperimentResult r = run_table1(c, 2);
    CHECK(r.records[0].mean_error <= 1e-6);
    CHECK(r.records[0].mean_trial_error <= 1e-6);
}

TEST_CASE("errors shrink with SNR at fixed alpha") {
    ExperimentConfig c = small_config(50);
    c.snr_list = {20, 40, 60};
    c.alpha_map = {{20, 0.0}, {40, 0.0}, {60, 0.0}};
    const ExperimentResult r = run_table1(c, 4);
    CHECK(r.records[0].mean_trial_error > r.records[1].mean_trial_error);
    CHECK(r.records[1].mean_trial_error > r.records[2].mean_trial_error);
    for (const auto& rec : r.records) CHECK(rec.mean_error <= rec.mean_trial_error + 1e-15);
}

TEST_CASE("run_table1 rejects non-injective angles") {
    ExperimentConfig c = small_config(2);
    c.theta = 0.0;
    try {
        run_table1(c);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::determinability);
    }
}

TEST_CASE("config JSON round trip") {
    ExperimentConfig c = ExperimentConfig::table1_defaults();
    CHECK(config_from_json(to_json(c)) == c);
    c.coefficients.kind = CoefficientSource::Kind::fixed;
    c.coefficients.values.assign(25, 0.125);
    c.theta = 0.1 + 0.2;
    CHECK(config_from_json(parse_json_text(to_json(c).dump())) == c);

    const fs::path d = temp_dir("config");
    save_config(c, d / "c.json");
    CHECK(load_config(d / "c.json") == c);
    CHECK_FALSE(fs::exists(d / "c.json.partial"));
    fs::remove_all(d);
}

TEST_CASE("config JSON errors") {
    nlohmann::json j = to_json(ExperimentConfig::table1_defaults());
    j.erase("trials");
    try {
        config_from_json(j);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(std::string(e.what()).find("trials") != std::string::npos);
    }
    j = to_json(ExperimentConfig::table1_defaults());
    j["alpha_map"]["abc"] = 1.0;
    CHECK_THROWS_AS(config_from_json(j), Error);

    const std::string text = to_json(ExperimentConfig::table1_defaults()).dump(2);
    try {
        parse_json_text(text.substr(0, text.size() / 2));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("result JSON and CSV") {
    ExperimentResult r = run_table1(small_config(5));
    r.records[0].min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    const ExperimentResult back = result_from_json(parse_json_text(to_json(r).dump()));
    REQUIRE(back.records.size() == 6);
    CHECK(std::isnan(back.records[0].min_eigenvalue));
    for (std::size_t i = 1; i < 6; ++i) CHECK(back.records[i] == r.records[i]);
    CHECK(back.config_hash == r.config_hash);

    const CsvTable t = parse_csv(result_csv(r));
    CHECK(t.header == std::vector<std::string>{"snr", "alpha", "mean_error", "std_error", "cond", "min_eig", "seconds"});
    REQUIRE(t.rows.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(t.rows[i][0] == r.records[i].snr_db);
        CHECK(t.rows[i][2] == r.records[i].mean_error);
    }
}

TEST_CASE("config_hash") {
    const ExperimentConfig c = ExperimentConfig::table1_defaults();
    CHECK(config_hash(c).size() == 16);
    CHECK(config_hash(c) == config_hash(ExperimentConfig::table1_defaults()));
    ExperimentConfig d = c;
    d.seed = 9;
    CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("angle sweep") {
    const LatticeRegion region(IntBox{0, 4, 0, 4});
    const BoxSplineGenerator g{1, 1};
    const auto rows = run_angle_sweep(g, region, 100, 7);
    REQUIRE(rows.size() == 100);
    for (const auto& r : rows) {
        CHECK((r.theta >= 0.0 && r.theta < 2 * std::numbers::pi));
        CHECK(r.injective);
        CHECK(r.positive_definite);
        CHECK(r.min_eigenvalue > 0.0);
    }
    CHECK(run_angle_sweep(g, region, 100, 7)[42].theta == rows[42].theta);

    const AngleRow axis = certify_angle(g, region, 0.0);
    CHECK_FALSE(axis.injective);
    CHECK_FALSE(axis.positive_definite);

    const AngleRow ref = certify_angle(g, region, 1.2208);
    const ExperimentResult r = run_table1(small_config(2));
    CHECK(ref.injective);
    CHECK(ref.positive_definite);
    CHECK(ref.min_eigenvalue == doctest::Approx(r.records[0].min_eigenvalue).epsilon(1e-12));
    CHECK(ref.condition == doctest::Approx(r.records[0].condition).epsilon(1e-12));

    const CsvTable t = parse_csv(angle_sweep_csv(rows));
    CHECK(t.rows.size() == 100);
    CHECK_THROWS_AS(run_angle_sweep(g, region, 0, 7), Error);
}
