#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "saradon/geometry.hpp"
#include "saradon/radon.hpp"

namespace saradon {

/// Gram system A c = y with A[j][l] = P phi_B(node_j - node_l).
/// Rows follow the region's lexicographic order, so node j belongs to region.points()[j].
struct GramSystem {
    std::vector<double> nodes;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    double condition_estimate = 0.0;
    double min_eigenvalue = 0.0;
};

/// Dense Gram matrix of the profile at node differences. Throws Error(duplicate_node)
/// naming the colliding indices when two nodes coincide.
Eigen::MatrixXd gram_matrix(const RadonProfile& profile, std::span<const double> nodes);

/// Nodes P k for k in region, the Gram matrix and its spectral diagnostics. The
/// duplicate-node error names the colliding lattice points. rhs defaults to zero.
GramSystem build_gram_system(const RadonProfile& profile, const LatticeRegion& region,
                             std::optional<Eigen::VectorXd> rhs = std::nullopt);

struct PdCertificate {
    bool positive_definite = false;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    /// Pivot index where the Cholesky factorization broke down.
    std::optional<std::size_t> failed_pivot;

    double condition() const { return max_eigenvalue / min_eigenvalue; }
};

/// Lower-triangular Cholesky factor with a breakdown report.
class Cholesky {
public:
    explicit Cholesky(const Eigen::MatrixXd& a);

    bool ok() const { return !failed_pivot_; }
    std::optional<std::size_t> failed_pivot() const { return failed_pivot_; }
    const Eigen::MatrixXd& factor() const { return l_; }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
    Eigen::MatrixXd l_;
    std::optional<std::size_t> failed_pivot_;
};

/// Cholesky-based PD check; on success the extreme eigenvalues come from inverse
/// and direct power iteration.
PdCertificate pd_certify(const Eigen::MatrixXd& matrix);
PdCertificate pd_certify(const GramSystem& system);

/// y_j = Pf(node_j).
Eigen::VectorXd sample_radon(const CoefficientGrid& coeffs, const BoxSplineGenerator& gen,
                             const ProjectionVector& proj, std::span<const double> nodes);

/// Noise variance for a requested SNR in dB: ||y||^2 / (N 10^(snr/10)).
double noise_variance(const Eigen::VectorXd& y, double snr_db);

/// y + eps with eps ~ N(0, sigma^2) i.i.d. Throws Error(degenerate_signal) for y = 0.
Eigen::VectorXd add_noise(const Eigen::VectorXd& y, double snr_db, std::uint64_t seed);
Eigen::VectorXd add_noise(const Eigen::VectorXd& y, double snr_db, std::mt19937_64& rng);

/// Solves A c = rhs by Cholesky. Throws Error(not_positive_definite) with the pivot.
Eigen::VectorXd solve_direct(const GramSystem& system);

/// (alpha I + A^T A)^{-1} A^T rhs, via the SVD of A so that alpha = 0 keeps the
/// conditioning of A rather than A^T A.
Eigen::VectorXd tikhonov_solve(const GramSystem& system, double alpha);

/// Repeated Tikhonov solves against one matrix.
class TikhonovSolver {
public:
    explicit TikhonovSolver(const Eigen::MatrixXd& a);

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs, double alpha) const;
    const Eigen::VectorXd& singular_values() const { return s_; }

private:
    Eigen::MatrixXd u_;
    Eigen::VectorXd s_;
    Eigen::MatrixXd v_;
};

/// f = sum_k c_k phi_B(. - k) on grid x grid; entry (i, j) is f(grid.at(i), grid.at(j)).
Eigen::MatrixXd synthesize(const CoefficientGrid& coeffs, const BoxSplineGenerator& gen, const Grid2D& grid);

/// ||f_hat - f_ref||_2 / ||f_ref||_2 over all grid entries.
double error_metric(const Eigen::MatrixXd& f_hat, const Eigen::MatrixXd& f_ref);

struct CollocationResult {
    Eigen::VectorXd values;
    long rank = 0;
    double residual_norm = 0.0;
};

/// Least-squares solve of M c = y with M[j][k] = P phi(t_j - P k) over the sample
/// nodes. Throws Error(determinability) when the numerical rank (tolerance
/// 1e-10 sigma_max) is below #region.
CollocationResult collocation_solve(const RadonProfile& profile, std::span<const double> sample_nodes,
                                    const LatticeRegion& region, const Eigen::VectorXd& y);

}  // namespace saradon
