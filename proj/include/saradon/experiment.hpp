#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "saradon/geometry.hpp"
#include "saradon/splines.hpp"

namespace saradon {

struct CoefficientSource {
    enum class Kind { fixed, random };

    Kind kind = Kind::random;
    std::vector<double> values;  // fixed: one per region point, lexicographic
    double low = 0.0;            // random: uniform in [low, high]
    double high = 1.0;
    std::uint64_t seed = 20240601;

    friend bool operator==(const CoefficientSource&, const CoefficientSource&) = default;
};

struct ExperimentConfig {
    BoxSplineGenerator generator;
    double theta = 1.2208;
    IntBox region{0, 4, 0, 4};
    CoefficientSource coefficients;
    std::vector<double> snr_list;
    std::vector<std::pair<double, double>> alpha_map;  // (snr_db, alpha)
    int trials = 1000;
    std::uint64_t seed = 1;
    Grid2D grid;

    /// Throws Error(config) on the first violated invariant.
    void validate() const;

    /// alpha for an SNR, matched to 1e-9. Throws Error(config) when missing.
    double alpha_for(double snr_db) const;

    /// Default SNR sweep: (1,1) generator, theta 1.2208, [0,4]^2, six SNR levels.
    static ExperimentConfig table1_defaults();

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Ground-truth coefficients described by the config.
CoefficientGrid make_coefficients(const ExperimentConfig& config);

struct SnrRecord {
    double snr_db = 0.0;
    double alpha = 0.0;
    double mean_error = 0.0;        // error of the trial-averaged coefficients
    double std_error = 0.0;         // spread of per-trial errors
    double mean_trial_error = 0.0;  // average of per-trial errors
    double condition = 0.0;
    double min_eigenvalue = 0.0;
    double seconds = 0.0;

    friend bool operator==(const SnrRecord&, const SnrRecord&) = default;
};

struct ExperimentResult {
    std::vector<SnrRecord> records;
    std::string config_hash;
    std::uint64_t seed = 0;

    friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

/// splitmix64 finaliser.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed of one trial: mix(mix(master ^ mix(snr_index + 1)) + trial).
std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_index, std::size_t trial);

/// Range [first, last) of trials assigned to one worker.
struct TrialSlice {
    std::size_t first = 0;
    std::size_t last = 0;
};

/// Runs the SNR sweep. Trials are split over `jobs` threads; results do not depend on jobs.
ExperimentResult run_table1(const ExperimentConfig& config, unsigned jobs = 1);

struct AngleRow {
    double theta = 0.0;
    bool injective = false;
    bool positive_definite = false;
    double min_eigenvalue = 0.0;
    double condition = 0.0;
};

/// Uniform angles on [0, 2 pi); injectivity and PD certification per angle.
std::vector<AngleRow> run_angle_sweep(const BoxSplineGenerator& gen, const LatticeRegion& region,
                                      int angle_count, std::uint64_t seed);

/// Certification row for one fixed angle.
AngleRow certify_angle(const BoxSplineGenerator& gen, const LatticeRegion& region, double theta);

// Persistence. Parse failures throw Error(parse) naming the line/column or field.
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& j);

nlohmann::json parse_json_text(const std::string& text);
nlohmann::json load_json_file(const std::filesystem::path& path);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);
ExperimentResult load_result(const std::filesystem::path& path);
void save_result(const ExperimentResult& result, const std::filesystem::path& path);

/// Header `snr,alpha,mean_error,std_error,cond,min_eig,seconds`, one row per SNR.
std::string result_csv(const ExperimentResult& result);

std::string angle_sweep_csv(const std::vector<AngleRow>& rows);

/// FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace saradon
