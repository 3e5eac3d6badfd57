#include "saradon/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "saradon/error.hpp"
#include "saradon/experiment.hpp"
#include "saradon/io.hpp"
#include "saradon/projection.hpp"
#include "saradon/radon.hpp"
#include "saradon/recon.hpp"

namespace saradon {

namespace {

using nlohmann::json;

constexpr int kExitInvalid = 2;

void fail(const std::string& msg) { throw Error(ErrorKind::config, msg); }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SA_RADON_SEED")) {
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(env, &pos);
            if (pos == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        fail(std::string("SA_RADON_SEED is not an unsigned integer: '") + env + "'");
    }
    return fallback;
}

LatticeRegion lattice_from(const std::vector<long>& v) {
    if (v.size() != 4) fail("--lattice needs four integers k1lo k1hi k2lo k2hi");
    LatticeRegion region(IntBox{v[0], v[1], v[2], v[3]});
    if (region.empty()) throw Error(ErrorKind::empty_region, "lattice region is empty");
    return region;
}

json projection_json(const ProjectionVector& p) {
    json j{{"theta", p.theta()}, {"p", {p.p1(), p.p2()}}};
    if (const auto& lift = p.integer_lift()) {
        j["integer_lift"] = {lift->p1, lift->p2};
        j["gamma"] = lift->gamma;
    }
    return j;
}

struct ProfileArgs {
    int n1 = 1, n2 = 1;
    double theta = 0.0, from = 0.0, to = 0.0, step = 0.0;
    std::string out, method = "analytic";
    bool closed_form = false;
};

void cmd_profile(const ProfileArgs& a) {
    if (!(a.step > 0.0)) fail("--step must be positive");
    if (!(a.to >= a.from)) fail("--to must not be below --from");
    ProfileMethod method = ProfileMethod::analytic_convolution;
    const std::string m = a.closed_form ? "closed-form" : a.method;
    if (m == "closed-form") method = ProfileMethod::closed_form_n1;
    else if (m == "quadrature") method = ProfileMethod::quadrature;
    else if (m != "analytic") fail("--method must be analytic, closed-form or quadrature");

    const RadonProfile profile(BoxSplineGenerator{a.n1, a.n2}, ProjectionVector::from_angle(a.theta), method);
    const long rows = long(std::floor((a.to - a.from) / a.step + 1e-9)) + 1;
    CsvTable t;
    t.header = {"t", "value"};
    for (long i = 0; i < rows; ++i) {
        const double x = a.from + double(i) * a.step;
        t.rows.push_back({x, profile(x)});
    }
    write_file_atomic(a.out, t.to_string());
}

struct DesignArgs {
    std::vector<double> region, supp{-1, 1, -1, 1};
    std::string out;
};

void cmd_design(const DesignArgs& a) {
    const Box e{a.region[0], a.region[1], a.region[2], a.region[3]};
    const Box s{a.supp[0], a.supp[1], a.supp[2], a.supp[3]};
    const LatticeRegion region = compute_region(e, s);
    const ProjectionVector proj = design_projection(region);
    const DesignCertificate cert = check_injectivity(proj, region);
    const IntBox& b = region.bounds();
    const json j{
        {"region", {{"k1", {b.k1lo, b.k1hi}}, {"k2", {b.k2lo, b.k2hi}}, {"count", region.size()}}},
        {"projection", projection_json(proj)},
        {"certificate",
         {{"a1_injective", cert.a1_injective}, {"a2_lattice", cert.a2_lattice}, {"min_node_gap", cert.min_node_gap}}},
    };
    write_file_atomic(a.out, j.dump(2) + "\n");
}

struct GramArgs {
    int n1 = 1, n2 = 1;
    double theta = 0.0;
    std::vector<long> lattice;
    std::string out;
};

void cmd_gram(const GramArgs& a, std::ostream& out) {
    const LatticeRegion region = lattice_from(a.lattice);
    const RadonProfile profile(BoxSplineGenerator{a.n1, a.n2}, ProjectionVector::from_angle(a.theta));
    const GramSystem sys = build_gram_system(profile, region);
    CsvTable t;
    t.header = {"node"};
    for (std::size_t l = 0; l < sys.nodes.size(); ++l) t.header.push_back("a" + std::to_string(l));
    for (Eigen::Index j = 0; j < sys.matrix.rows(); ++j) {
        std::vector<double> row{sys.nodes[std::size_t(j)]};
        for (Eigen::Index l = 0; l < sys.matrix.cols(); ++l) row.push_back(sys.matrix(j, l));
        t.rows.push_back(std::move(row));
    }
    write_file_atomic(a.out, t.to_string());
    out << json{{"size", sys.nodes.size()},
                {"positive_definite", std::isfinite(sys.condition_estimate)},
                {"min_eig", std::isfinite(sys.min_eigenvalue) ? json(sys.min_eigenvalue) : json(nullptr)},
                {"cond", std::isfinite(sys.condition_estimate) ? json(sys.condition_estimate) : json(nullptr)}}
               .dump()
        << "\n";
}

struct SimulateArgs {
    std::string config, out;
    std::optional<double> snr;
    std::optional<std::uint64_t> seed;
};

void cmd_simulate(const SimulateArgs& a) {
    const ExperimentConfig cfg = load_config(a.config);
    const CoefficientGrid truth = make_coefficients(cfg);
    const ProjectionVector proj = ProjectionVector::from_angle(cfg.theta);
    std::vector<double> nodes;
    for (const auto& k : truth.region.points()) nodes.push_back(proj.apply(k));
    Eigen::VectorXd y = sample_radon(truth, cfg.generator, proj, nodes);
    if (a.snr) y = add_noise(y, *a.snr, resolve_seed(a.seed, cfg.seed));
    CsvTable t;
    t.header = {"k1", "k2", "node", "sample"};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& k = truth.region.points()[i];
        t.rows.push_back({double(k[0]), double(k[1]), nodes[i], y[Eigen::Index(i)]});
    }
    write_file_atomic(a.out, t.to_string());
}

struct ReconstructArgs {
    std::string config, samples, out;
    double alpha = 0.0;
};

void cmd_reconstruct(const ReconstructArgs& a, std::ostream& out) {
    const ExperimentConfig cfg = load_config(a.config);
    const CoefficientGrid truth = make_coefficients(cfg);
    const LatticeRegion& region = truth.region;
    const CsvTable samples = read_csv(a.samples);
    const std::size_t ck1 = samples.column("k1"), ck2 = samples.column("k2"), cs = samples.column("sample");
    Eigen::VectorXd y = Eigen::VectorXd::Constant(Eigen::Index(region.size()), std::nan(""));
    for (const auto& row : samples.rows) {
        const long idx = region.index_of({long(row[ck1]), long(row[ck2])});
        if (idx < 0) fail("sample for lattice point outside the config region");
        y[idx] = row[cs];
    }
    if (!y.allFinite()) fail("samples CSV does not cover every lattice point of the region");

    const RadonProfile profile(cfg.generator, ProjectionVector::from_angle(cfg.theta));
    GramSystem sys = build_gram_system(profile, region, y);
    const Eigen::VectorXd c = a.alpha > 0.0 ? tikhonov_solve(sys, a.alpha) : solve_direct(sys);

    CsvTable t;
    t.header = {"k1", "k2", "coefficient"};
    for (std::size_t i = 0; i < region.size(); ++i)
        t.rows.push_back({double(region.points()[i][0]), double(region.points()[i][1]), c[Eigen::Index(i)]});
    const CoefficientGrid rec(region, std::vector<double>(c.data(), c.data() + c.size()));
    const double err = error_metric(synthesize(rec, cfg.generator, cfg.grid), synthesize(truth, cfg.generator, cfg.grid));
    write_file_atomic(a.out, t.to_string());
    out << json{{"error", err}, {"cond", sys.condition_estimate}, {"min_eig", sys.min_eigenvalue}}.dump() << "\n";
}

struct Table1Args {
    std::string config, out, json_out;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
    bool omit_timing = false;
};

void cmd_table1(const Table1Args& a, std::ostream& out) {
    ExperimentConfig cfg = load_config(a.config);
    cfg.seed = resolve_seed(a.seed, cfg.seed);
    cfg.validate();
    if (a.jobs < 1) fail("--jobs must be >= 1");
    ExperimentResult res = run_table1(cfg, a.jobs);
    if (a.omit_timing)
        for (auto& r : res.records) r.seconds = 0.0;
    const std::string csv = result_csv(res);
    if (!a.json_out.empty()) save_result(res, a.json_out);
    write_file_atomic(a.out, csv);
    out << csv;
}

struct SweepArgs {
    int n1 = 1, n2 = 1, count = 100;
    std::vector<long> lattice{0, 4, 0, 4};
    std::optional<std::uint64_t> seed;
    std::string out;
};

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
    const LatticeRegion region = lattice_from(a.lattice);
    const auto rows = run_angle_sweep(BoxSplineGenerator{a.n1, a.n2}, region, a.count, resolve_seed(a.seed, 7));
    write_file_atomic(a.out, angle_sweep_csv(rows));
    std::size_t ok = 0;
    for (const auto& r : rows) ok += r.injective && r.positive_definite;
    out << ok << "/" << rows.size() << " angles injective and positive definite\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-angle Radon reconstruction in box-spline spaces", "sa_radon"};
    app.require_subcommand(1);

    ProfileArgs pa;
    auto* profile = app.add_subcommand("profile", "Sample the projected generator P phi_B to CSV");
    profile->add_option("--n1", pa.n1)->check(CLI::PositiveNumber);
    profile->add_option("--n2", pa.n2)->check(CLI::PositiveNumber);
    profile->add_option("--theta", pa.theta)->required();
    profile->add_option("--from", pa.from)->required();
    profile->add_option("--to", pa.to)->required();
    profile->add_option("--step", pa.step)->required();
    profile->add_option("--method", pa.method, "analytic | closed-form | quadrature");
    profile->add_flag("--closed-form", pa.closed_form, "Same as --method closed-form");
    profile->add_option("--out", pa.out)->required();

    DesignArgs da;
    auto* design = app.add_subcommand("design", "Lattice region, designed projection and certificate as JSON");
    design->add_option("--region", da.region, "a1 b1 a2 b2")->expected(4)->required();
    design->add_option("--supp", da.supp, "N1 M1 N2 M2")->expected(4);
    design->add_option("--out", da.out)->required();

    GramArgs ga;
    auto* gram = app.add_subcommand("gram", "Gram matrix of the single-angle system to CSV");
    gram->add_option("--n1", ga.n1)->check(CLI::PositiveNumber);
    gram->add_option("--n2", ga.n2)->check(CLI::PositiveNumber);
    gram->add_option("--theta", ga.theta)->required();
    gram->add_option("--lattice", ga.lattice, "k1lo k1hi k2lo k2hi")->expected(4)->required();
    gram->add_option("--out", ga.out)->required();

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Radon samples of the configured function, optionally noisy");
    simulate->add_option("--config", sa.config)->required();
    simulate->add_option("--snr", sa.snr);
    simulate->add_option("--seed", sa.seed);
    simulate->add_option("--out", sa.out)->required();

    ReconstructArgs ra;
    auto* reconstruct = app.add_subcommand("reconstruct", "Coefficients from samples; prints the error");
    reconstruct->add_option("--config", ra.config)->required();
    reconstruct->add_option("--samples", ra.samples)->required();
    reconstruct->add_option("--alpha", ra.alpha)->check(CLI::NonNegativeNumber);
    reconstruct->add_option("--out", ra.out)->required();

    Table1Args ta;
    auto* table1 = app.add_subcommand("table1", "SNR sweep with Tikhonov solves");
    table1->add_option("--config", ta.config)->required();
    table1->add_option("--out", ta.out)->required();
    table1->add_option("--json", ta.json_out, "Also write the full result as JSON");
    table1->add_option("--jobs", ta.jobs)->check(CLI::PositiveNumber);
    table1->add_option("--seed", ta.seed);
    table1->add_flag("--omit-timing", ta.omit_timing, "Write 0 in the seconds column");

    SweepArgs wa;
    auto* sweep = app.add_subcommand("sweep", "Injectivity and PD certification over random angles");
    sweep->add_option("--n1", wa.n1)->check(CLI::PositiveNumber);
    sweep->add_option("--n2", wa.n2)->check(CLI::PositiveNumber);
    sweep->add_option("--lattice", wa.lattice, "k1lo k1hi k2lo k2hi")->expected(4);
    sweep->add_option("--count", wa.count)->check(CLI::PositiveNumber);
    sweep->add_option("--seed", wa.seed);
    sweep->add_option("--out", wa.out)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto chosen = app.get_subcommands();
        out << (chosen.empty() ? app.help() : chosen.front()->help());
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        if (*profile) cmd_profile(pa);
        else if (*design) cmd_design(da);
        else if (*gram) cmd_gram(ga, out);
        else if (*simulate) cmd_simulate(sa);
        else if (*reconstruct) cmd_reconstruct(ra, out);
        else if (*table1) cmd_table1(ta, out);
        else if (*sweep) cmd_sweep(wa, out);
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "unexpected failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace saradon
