#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "saradon/cli.hpp"
#include "saradon/experiment.hpp"
#include "saradon/io.hpp"

using namespace saradon;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("saradon_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }

    bool has_partial() const {
        for (const auto& e : fs::directory_iterator(path))
            if (e.path().extension() == ".partial") return true;
        return false;
    }
};

std::string small_config(const TempDir& d, int trials = 12, bool drop_alpha = false) {
    ExperimentConfig c = ExperimentConfig::table1_defaults();
    c.trials = trials;
    if (drop_alpha) c.alpha_map.pop_back();
    const std::string p = d / (drop_alpha ? "bad.json" : "cfg.json");
    nlohmann::json j = to_json(c);
    write_file_atomic(p, j.dump(2));
    return p;
}

}  // namespace

TEST_CASE("profile writes the expected rows") {
    TempDir d("profile");
    const Run r = run({"profile", "--n1", "1", "--n2", "1", "--theta", "1.2208", "--from", "-2", "--to", "2", "--step",
                       "0.01", "--out", d / "p.csv"});
    CHECK(r.code == 0);
    const CsvTable t = read_csv(d / "p.csv");
    CHECK(t.header == std::vector<std::string>{"t", "value"});
    CHECK(t.rows.size() == 401);
    CHECK(t.rows.front()[0] == -2.0);
    CHECK(t.rows.back()[0] == doctest::Approx(2.0).epsilon(1e-12));

    // The three methods agree.
    for (const char* m : {"closed-form", "quadrature"}) {
        CHECK(run({"profile", "--theta", "1.2208", "--from", "-2", "--to", "2", "--step", "0.01", "--method", m, "--out",
                   d / "q.csv"})
                  .code == 0);
        const CsvTable q = read_csv(d / "q.csv");
        REQUIRE(q.rows.size() == 401);
        for (std::size_t i = 0; i < 401; ++i) CHECK(std::abs(q.rows[i][1] - t.rows[i][1]) <= 1e-9);
    }
    CHECK_FALSE(d.has_partial());
}

TEST_CASE("profile errors") {
    TempDir d("profile_err");
    const Run wedge = run({"profile", "--theta", "0.3", "--from", "-1", "--to", "1", "--step", "0.1", "--closed-form",
                           "--out", d / "p.csv"});
    CHECK(wedge.code == 2);
    CHECK_FALSE(wedge.err.empty());
    CHECK_FALSE(fs::exists(d / "p.csv"));

    CHECK(run({"profile", "--theta", "1", "--from", "-1", "--to", "1", "--step", "0", "--out", d / "p.csv"}).code == 2);
    CHECK(run({"profile", "--theta", "1", "--from", "1", "--to", "-1", "--step", "0.1", "--out", d / "p.csv"}).code == 2);
    CHECK(run({"profile", "--theta", "1", "--from", "-1", "--to", "1", "--step", "0.1", "--method", "magic", "--out",
               d / "p.csv"})
              .code == 2);
    CHECK(run({"profile", "--n1", "0", "--theta", "1", "--from", "-1", "--to", "1", "--step", "0.1", "--out", d / "p.csv"})
              .code == 2);
    CHECK_FALSE(fs::exists(d / "p.csv"));
    CHECK_FALSE(d.has_partial());
}

TEST_CASE("design") {
    TempDir d("design");
    const Run r = run({"design", "--region", "1", "3", "1", "3", "--out", d / "d.json"});
    REQUIRE(r.code == 0);
    const auto j = load_json_file(d / "d.json");
    CHECK(j["projection"]["integer_lift"] == nlohmann::json({1, 5}));
    CHECK(j["certificate"]["a1_injective"] == true);
    CHECK(j["certificate"]["a2_lattice"] == true);
    CHECK(j["region"]["count"] == 25);
    CHECK(j["region"]["k1"] == nlohmann::json({0, 4}));

    const Run odd = run({"design", "--region", "0.5", "3.7", "0", "2", "--supp", "-1.5", "1", "-1", "0.2", "--out", d / "e.json"});
    CHECK(odd.code == 0);

    const Run empty = run({"design", "--region", "0.1", "0.2", "0.1", "0.2", "--supp", "0", "0", "0", "0", "--out", d / "x.json"});
    CHECK(empty.code == 2);
    CHECK_FALSE(fs::exists(d / "x.json"));
    CHECK(run({"design", "--region", "0", "1", "0", "--out", d / "x.json"}).code == 2);
}

TEST_CASE("gram") {
    TempDir d("gram");
    const Run r = run({"gram", "--theta", "1.2208", "--lattice", "0", "4", "0", "4", "--out", d / "g.csv"});
    REQUIRE(r.code == 0);
    const CsvTable t = read_csv(d / "g.csv");
    CHECK(t.header.size() == 26);
    CHECK(t.rows.size() == 25);
    const auto j = parse_json_text(r.out);
    CHECK(j["positive_definite"] == true);
    CHECK(j["size"] == 25);

    CHECK(run({"gram", "--theta", "0", "--lattice", "0", "4", "0", "4", "--out", d / "h.csv"}).code == 2);
    CHECK(run({"gram", "--theta", "1", "--lattice", "3", "2", "0", "4", "--out", d / "h.csv"}).code == 2);
    CHECK_FALSE(fs::exists(d / "h.csv"));
}

TEST_CASE("simulate then reconstruct") {
    TempDir d("simrec");
    const std::string cfg = small_config(d);
    REQUIRE(run({"simulate", "--config", cfg, "--out", d / "s.csv"}).code == 0);
    const Run clean = run({"reconstruct", "--config", cfg, "--samples", d / "s.csv", "--out", d / "c.csv"});
    REQUIRE(clean.code == 0);
    CHECK(parse_json_text(clean.out)["error"].get<double>() <= 1e-6);
    CHECK(read_csv(d / "c.csv").rows.size() == 25);

    REQUIRE(run({"simulate", "--config", cfg, "--snr", "40", "--seed", "3", "--out", d / "n.csv"}).code == 0);
    const Run noisy =
        run({"reconstruct", "--config", cfg, "--samples", d / "n.csv", "--alpha", "3.5e-5", "--out", d / "m.csv"});
    REQUIRE(noisy.code == 0);
    const double e = parse_json_text(noisy.out)["error"].get<double>();
    CHECK(e > 1e-6);
    CHECK(e < 1.0);

    write_file_atomic(d / "bad.csv", "k1,k2,sample\n0,0,1\n");
    CHECK(run({"reconstruct", "--config", cfg, "--samples", d / "bad.csv", "--out", d / "z.csv"}).code == 2);
    CHECK_FALSE(fs::exists(d / "z.csv"));
}

TEST_CASE("table1 is independent of jobs") {
    TempDir d("table1");
    const std::string cfg = small_config(d, 24);
    const Run a = run({"table1", "--config", cfg, "--out", d / "a.csv", "--jobs", "1", "--omit-timing"});
    const Run b = run({"table1", "--config", cfg, "--out", d / "b.csv", "--jobs", "8", "--omit-timing", "--json", d / "b.json"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(read_file(d / "a.csv") == read_file(d / "b.csv"));
    CHECK(read_csv(d / "a.csv").rows.size() == 6);
    CHECK(load_result(d / "b.json").records.size() == 6);
    CHECK_FALSE(d.has_partial());
}

TEST_CASE("table1 errors") {
    TempDir d("table1_err");
    const std::string bad = small_config(d, 4, true);
    const Run r = run({"table1", "--config", bad, "--out", d / "x.csv"});
    CHECK(r.code == 2);
    CHECK(r.err.find("55") != std::string::npos);
    CHECK_FALSE(fs::exists(d / "x.csv"));

    write_file_atomic(d / "trunc.json", "{\"generator\": {\"n1\": 1,");
    CHECK(run({"table1", "--config", d / "trunc.json", "--out", d / "x.csv"}).code == 2);
    CHECK(run({"table1", "--config", d / "missing.json", "--out", d / "x.csv"}).code == 2);
    CHECK_FALSE(fs::exists(d / "x.csv"));
    CHECK_FALSE(d.has_partial());
}

TEST_CASE("seed resolution") {
    TempDir d("seed");
    const std::string cfg = small_config(d, 6);
    auto table = [&](std::vector<std::string> extra, const std::string& out) {
        std::vector<std::string> args{"table1", "--config", cfg, "--omit-timing", "--json", d / (out + ".json"), "--out",
                                      d / out};
        args.insert(args.end(), extra.begin(), extra.end());
        REQUIRE(run(args).code == 0);
        return load_result(d / (out + ".json")).seed;
    };
    unsetenv("SA_RADON_SEED");
    CHECK(table({}, "a") == 1);
    setenv("SA_RADON_SEED", "99", 1);
    CHECK(table({}, "b") == 99);
    CHECK(table({"--seed", "5"}, "c") == 5);
    CHECK(read_file(d / "b") != read_file(d / "a"));
    setenv("SA_RADON_SEED", "abc", 1);
    CHECK(run({"table1", "--config", cfg, "--out", d / "x"}).code == 2);
    unsetenv("SA_RADON_SEED");
}

TEST_CASE("sweep") {
    TempDir d("sweep");
    const Run r = run({"sweep", "--count", "20", "--out", d / "s.csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("20/20") != std::string::npos);
    CHECK(read_csv(d / "s.csv").rows.size() == 20);
}

TEST_CASE("argument errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"profile", "--theta", "1", "--from", "0", "--to", "1", "--step", "0.1", "--out", "x", "--wat"}).code == 2);
    CHECK(run({"profile", "--theta", "abc", "--from", "0", "--to", "1", "--step", "0.1", "--out", "x"}).code == 2);
    const Run help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("table1") != std::string::npos);
}
