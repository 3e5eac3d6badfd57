#include "saradon/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "saradon/error.hpp"
#include "saradon/io.hpp"
#include "saradon/projection.hpp"
#include "saradon/radon.hpp"
#include "saradon/recon.hpp"

namespace saradon {

using nlohmann::json;

void ExperimentConfig::validate() const {
    if (generator.n1 < 1 || generator.n2 < 1) throw Error(ErrorKind::config, "generator orders must be positive");
    if (!std::isfinite(theta)) throw Error(ErrorKind::config, "theta must be finite");
    if (region.empty()) throw Error(ErrorKind::config, "region is empty");
    if (trials < 1) throw Error(ErrorKind::config, "trials must be >= 1");
    if (snr_list.empty()) throw Error(ErrorKind::config, "snr_list is empty");
    for (double snr : snr_list) {
        const double a = alpha_for(snr);
        if (!(a >= 0.0)) throw Error(ErrorKind::config, "alpha for SNR " + format_double(snr) + " is negative");
    }
    if (grid.count < 1 || !(grid.step > 0.0)) throw Error(ErrorKind::config, "grid needs count >= 1 and step > 0");
    if (coefficients.kind == CoefficientSource::Kind::fixed) {
        const std::size_t n = std::size_t(region.k1hi - region.k1lo + 1) * std::size_t(region.k2hi - region.k2lo + 1);
        if (coefficients.values.size() != n)
            throw Error(ErrorKind::config, "fixed coefficients: expected " + std::to_string(n) + " values, got " +
                                               std::to_string(coefficients.values.size()));
    } else if (!(coefficients.low <= coefficients.high)) {
        throw Error(ErrorKind::config, "random coefficient range needs low <= high");
    }
}

double ExperimentConfig::alpha_for(double snr_db) const {
    for (const auto& [snr, alpha] : alpha_map)
        if (std::abs(snr - snr_db) <= 1e-9 * std::max(1.0, std::abs(snr_db))) return alpha;
    throw Error(ErrorKind::config, "alpha_map has no entry for SNR " + format_double(snr_db));
}

ExperimentConfig ExperimentConfig::table1_defaults() {
    ExperimentConfig c;
    c.generator = {1, 1};
    c.theta = 1.2208;
    c.region = IntBox{0, 4, 0, 4};
    c.snr_list = {30, 35, 40, 45, 50, 55};
    c.alpha_map = {{30, 2e-3}, {35, 2.5e-4}, {40, 3.5e-5}, {45, 2e-6}, {50, 1.5e-7}, {55, 9.4e-8}};
    c.trials = 1000;
    c.seed = 1;
    return c;
}

CoefficientGrid make_coefficients(const ExperimentConfig& config) {
    LatticeRegion region(config.region);
    if (config.coefficients.kind == CoefficientSource::Kind::fixed)
        return CoefficientGrid(std::move(region), config.coefficients.values);
    std::mt19937_64 rng(config.coefficients.seed);
    std::uniform_real_distribution<double> uni(config.coefficients.low, config.coefficients.high);
    std::vector<double> v(region.size());
    for (double& x : v) x = uni(rng);
    return CoefficientGrid(std::move(region), std::move(v));
}

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_index, std::size_t trial) {
    return mix_seed(mix_seed(master ^ mix_seed(snr_index + 1)) + trial);
}

namespace {

std::vector<TrialSlice> split_trials(std::size_t trials, unsigned jobs) {
    jobs = std::max(1u, std::min<unsigned>(jobs, unsigned(trials)));
    std::vector<TrialSlice> out;
    const std::size_t base = trials / jobs;
    const std::size_t extra = trials % jobs;
    std::size_t first = 0;
    for (unsigned w = 0; w < jobs; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        out.push_back({first, first + len});
        first += len;
    }
    return out;
}

template <class F>
void parallel_slices(std::size_t trials, unsigned jobs, F&& body) {
    const auto slices = split_trials(trials, jobs);
    if (slices.size() == 1) {
        body(slices[0]);
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(slices.size());
    for (std::size_t w = 0; w < slices.size(); ++w) {
        workers.emplace_back([&, w] {
            try {
                body(slices[w]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

ExperimentResult run_table1(const ExperimentConfig& config, unsigned jobs) {
    config.validate();
    const BoxSplineGenerator gen = config.generator;
    const ProjectionVector proj = ProjectionVector::from_angle(config.theta);
    const CoefficientGrid truth = make_coefficients(config);
    const LatticeRegion& region = truth.region;

    const DesignCertificate cert = check_injectivity(proj, region);
    if (!cert.a1_injective)
        throw Error(ErrorKind::determinability, "theta = " + format_double(config.theta) + " is not injective on the region");

    const RadonProfile profile(gen, proj);
    GramSystem system = build_gram_system(profile, region);
    system.rhs = sample_radon(truth, gen, proj, system.nodes);
    const TikhonovSolver solver(system.matrix);
    const Eigen::MatrixXd f_ref = synthesize(truth, gen, config.grid);

    ExperimentResult result;
    result.config_hash = config_hash(config);
    result.seed = config.seed;

    const std::size_t trials = std::size_t(config.trials);
    const Eigen::Index n = Eigen::Index(region.size());
    for (std::size_t si = 0; si < config.snr_list.size(); ++si) {
        const auto start = std::chrono::steady_clock::now();
        const double snr = config.snr_list[si];
        const double alpha = config.alpha_for(snr);

        Eigen::MatrixXd coeffs(n, Eigen::Index(trials));
        std::vector<double> errors(trials);
        parallel_slices(trials, jobs, [&](TrialSlice slice) {
            for (std::size_t t = slice.first; t < slice.last; ++t) {
                std::mt19937_64 rng(trial_seed(config.seed, si, t));
                const Eigen::VectorXd noisy = add_noise(system.rhs, snr, rng);
                const Eigen::VectorXd c = solver.solve(noisy, alpha);
                coeffs.col(Eigen::Index(t)) = c;
                const CoefficientGrid trial(region, std::vector<double>(c.data(), c.data() + c.size()));
                errors[t] = error_metric(synthesize(trial, gen, config.grid), f_ref);
            }
        });

        // Serial reduction in trial order keeps the result independent of jobs.
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
        double err_sum = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            mean += coeffs.col(Eigen::Index(t));
            err_sum += errors[t];
        }
        mean /= double(trials);
        const double err_mean = err_sum / double(trials);
        double var = 0.0;
        for (double e : errors) var += (e - err_mean) * (e - err_mean);
        var = trials > 1 ? var / double(trials - 1) : 0.0;

        const CoefficientGrid averaged(region, std::vector<double>(mean.data(), mean.data() + mean.size()));
        SnrRecord rec;
        rec.snr_db = snr;
        rec.alpha = alpha;
        rec.mean_error = error_metric(synthesize(averaged, gen, config.grid), f_ref);
        rec.std_error = std::sqrt(var);
        rec.mean_trial_error = err_mean;
        rec.condition = system.condition_estimate;
        rec.min_eigenvalue = system.min_eigenvalue;
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.records.push_back(rec);
    }
    return result;
}

AngleRow certify_angle(const BoxSplineGenerator& gen, const LatticeRegion& region, double theta) {
    const ProjectionVector proj = ProjectionVector::from_angle(theta);
    AngleRow row;
    row.theta = theta;
    row.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    row.condition = std::numeric_limits<double>::quiet_NaN();
    row.injective = check_injectivity(proj, region).a1_injective;
    if (!row.injective) return row;
    const RadonProfile profile(gen, proj);
    try {
        const PdCertificate pd = pd_certify(build_gram_system(profile, region).matrix);
        row.positive_definite = pd.positive_definite;
        if (pd.positive_definite) {
            row.min_eigenvalue = pd.min_eigenvalue;
            row.condition = pd.condition();
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::duplicate_node) throw;
        row.injective = false;
    }
    return row;
}

std::vector<AngleRow> run_angle_sweep(const BoxSplineGenerator& gen, const LatticeRegion& region, int angle_count,
                                      std::uint64_t seed) {
    if (angle_count < 1) throw Error(ErrorKind::config, "angle_count must be >= 1");
    if (region.empty()) throw Error(ErrorKind::empty_region, "angle sweep over an empty region");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    std::vector<AngleRow> rows;
    rows.reserve(std::size_t(angle_count));
    for (int i = 0; i < angle_count; ++i) rows.push_back(certify_angle(gen, region, uni(rng)));
    return rows;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object()) throw Error(ErrorKind::parse, std::string("expected an object holding '") + name + "'");
    auto it = j.find(name);
    if (it == j.end()) throw Error(ErrorKind::parse, std::string("missing field '") + name + "'");
    return *it;
}

template <class T>
T get_as(const json& j, const char* name) {
    const json& v = field(j, name);
    try {
        return v.get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse, std::string("field '") + name + "': " + e.what());
    }
}

double get_double(const json& j, const char* name) {
    const json& v = field(j, name);
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!v.is_number()) throw Error(ErrorKind::parse, std::string("field '") + name + "' is not a number");
    return v.get<double>();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

json to_json(const ExperimentConfig& c) {
    json coeffs;
    if (c.coefficients.kind == CoefficientSource::Kind::fixed) {
        coeffs = {{"kind", "fixed"}, {"values", c.coefficients.values}};
    } else {
        coeffs = {{"kind", "random"}, {"low", c.coefficients.low}, {"high", c.coefficients.high}, {"seed", c.coefficients.seed}};
    }
    json alpha = json::object();
    for (const auto& [snr, a] : c.alpha_map) alpha[format_double(snr)] = a;
    return json{
        {"generator", {{"n1", c.generator.n1}, {"n2", c.generator.n2}}},
        {"theta", c.theta},
        {"region", {{"k1", {c.region.k1lo, c.region.k1hi}}, {"k2", {c.region.k2lo, c.region.k2hi}}}},
        {"coefficients", coeffs},
        {"snr_list", c.snr_list},
        {"alpha_map", alpha},
        {"trials", c.trials},
        {"seed", c.seed},
        {"grid", {{"origin", c.grid.origin}, {"step", c.grid.step}, {"count", c.grid.count}}},
    };
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    const json& g = field(j, "generator");
    c.generator = {get_as<int>(g, "n1"), get_as<int>(g, "n2")};
    c.theta = get_double(j, "theta");
    const json& r = field(j, "region");
    const auto k1 = get_as<std::array<long, 2>>(r, "k1");
    const auto k2 = get_as<std::array<long, 2>>(r, "k2");
    c.region = IntBox{k1[0], k1[1], k2[0], k2[1]};

    const json& co = field(j, "coefficients");
    const auto kind = get_as<std::string>(co, "kind");
    if (kind == "fixed") {
        c.coefficients.kind = CoefficientSource::Kind::fixed;
        c.coefficients.values = get_as<std::vector<double>>(co, "values");
    } else if (kind == "random") {
        c.coefficients.kind = CoefficientSource::Kind::random;
        c.coefficients.low = get_double(co, "low");
        c.coefficients.high = get_double(co, "high");
        c.coefficients.seed = get_as<std::uint64_t>(co, "seed");
    } else {
        throw Error(ErrorKind::parse, "field 'coefficients.kind': expected 'fixed' or 'random', got '" + kind + "'");
    }

    c.snr_list = get_as<std::vector<double>>(j, "snr_list");
    const json& am = field(j, "alpha_map");
    if (!am.is_object()) throw Error(ErrorKind::parse, "field 'alpha_map' must be an object");
    c.alpha_map.clear();
    for (auto it = am.begin(); it != am.end(); ++it) {
        double snr = 0.0;
        try {
            snr = parse_double(it.key());
        } catch (const Error&) {
            throw Error(ErrorKind::parse, "field 'alpha_map': key '" + it.key() + "' is not a number");
        }
        if (!it.value().is_number()) throw Error(ErrorKind::parse, "field 'alpha_map." + it.key() + "' is not a number");
        c.alpha_map.emplace_back(snr, it.value().get<double>());
    }
    std::stable_sort(c.alpha_map.begin(), c.alpha_map.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    c.trials = get_as<int>(j, "trials");
    c.seed = get_as<std::uint64_t>(j, "seed");
    const json& gr = field(j, "grid");
    c.grid = Grid2D{get_double(gr, "origin"), get_double(gr, "step"), get_as<int>(gr, "count")};
    return c;
}

json to_json(const ExperimentResult& r) {
    json recs = json::array();
    for (const auto& s : r.records) {
        recs.push_back({
            {"snr", s.snr_db},
            {"alpha", s.alpha},
            {"mean_error", number_or_null(s.mean_error)},
            {"std_error", number_or_null(s.std_error)},
            {"mean_trial_error", number_or_null(s.mean_trial_error)},
            {"cond", number_or_null(s.condition)},
            {"min_eig", number_or_null(s.min_eigenvalue)},
            {"seconds", s.seconds},
        });
    }
    return json{{"records", recs}, {"provenance", {{"config_hash", r.config_hash}, {"seed", r.seed}}}};
}

ExperimentResult result_from_json(const json& j) {
    ExperimentResult r;
    const json& recs = field(j, "records");
    if (!recs.is_array()) throw Error(ErrorKind::parse, "field 'records' must be an array");
    for (const json& s : recs) {
        SnrRecord rec;
        rec.snr_db = get_double(s, "snr");
        rec.alpha = get_double(s, "alpha");
        rec.mean_error = get_double(s, "mean_error");
        rec.std_error = get_double(s, "std_error");
        rec.mean_trial_error = get_double(s, "mean_trial_error");
        rec.condition = get_double(s, "cond");
        rec.min_eigenvalue = get_double(s, "min_eig");
        rec.seconds = get_double(s, "seconds");
        r.records.push_back(rec);
    }
    const json& p = field(j, "provenance");
    r.config_hash = get_as<std::string>(p, "config_hash");
    r.seed = get_as<std::uint64_t>(p, "seed");
    return r;
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::parse, line_col(text, e.byte) + ": " + e.what());
    }
}

json load_json_file(const std::filesystem::path& path) { return parse_json_text(read_file(path)); }

ExperimentConfig load_config(const std::filesystem::path& path) { return config_from_json(load_json_file(path)); }

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
    write_file_atomic(path, to_json(config).dump(2) + "\n");
}

ExperimentResult load_result(const std::filesystem::path& path) { return result_from_json(load_json_file(path)); }

void save_result(const ExperimentResult& result, const std::filesystem::path& path) {
    write_file_atomic(path, to_json(result).dump(2) + "\n");
}

std::string result_csv(const ExperimentResult& result) {
    CsvTable t;
    t.header = {"snr", "alpha", "mean_error", "std_error", "cond", "min_eig", "seconds"};
    for (const auto& r : result.records)
        t.rows.push_back({r.snr_db, r.alpha, r.mean_error, r.std_error, r.condition, r.min_eigenvalue, r.seconds});
    return t.to_string();
}

std::string angle_sweep_csv(const std::vector<AngleRow>& rows) {
    CsvTable t;
    t.header = {"theta", "injective", "positive_definite", "min_eig", "cond"};
    for (const auto& r : rows)
        t.rows.push_back({r.theta, r.injective ? 1.0 : 0.0, r.positive_definite ? 1.0 : 0.0, r.min_eigenvalue, r.condition});
    return t.to_string();
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace saradon
