#include "saradon/recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "saradon/error.hpp"

namespace saradon {

namespace {

std::string point_str(const LatticePoint& k) {
    return "(" + std::to_string(k[0]) + ", " + std::to_string(k[1]) + ")";
}

// Index pair of the first two coinciding nodes, if any.
std::optional<std::pair<std::size_t, std::size_t>> find_duplicate(std::span<const double> nodes) {
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const double a = nodes[order[i]];
        const double b = nodes[order[i + 1]];
        if (b - a <= 1e-9 * std::max(1.0, std::abs(a)))
            return std::pair{std::min(order[i], order[i + 1]), std::max(order[i], order[i + 1])};
    }
    return std::nullopt;
}

Eigen::VectorXd start_vector(Eigen::Index n) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.37 * std::sin(1.0 + double(i));
    return x.normalized();
}

// Power iteration on x -> op(x); returns the Rayleigh quotient of the dominant eigenvector.
template <class Op>
double power_iteration(Op&& op, Eigen::Index n) {
    Eigen::VectorXd x = start_vector(n);
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
        Eigen::VectorXd y = op(x);
        const double next = x.dot(y);
        const double norm = y.norm();
        if (norm == 0.0) return 0.0;
        const double resid = (y - next * x).norm();
        x = y / norm;
        const bool converged = std::abs(next - lambda) <= 1e-15 * std::abs(next) && resid <= 1e-9 * std::abs(next);
        lambda = next;
        if (converged) break;
    }
    return lambda;
}

}  // namespace

Eigen::MatrixXd gram_matrix(const RadonProfile& profile, std::span<const double> nodes) {
    if (auto dup = find_duplicate(nodes))
        throw Error(ErrorKind::duplicate_node, "nodes " + std::to_string(dup->first) + " and " +
                                                   std::to_string(dup->second) + " coincide at " +
                                                   std::to_string(nodes[dup->first]));
    const auto n = Eigen::Index(nodes.size());
    Eigen::MatrixXd a(n, n);
    const double diag = profile(0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        a(j, j) = diag;
        for (Eigen::Index l = j + 1; l < n; ++l) {
            const double v = profile(nodes[std::size_t(j)] - nodes[std::size_t(l)]);
            a(j, l) = v;
            a(l, j) = v;
        }
    }
    return a;
}

GramSystem build_gram_system(const RadonProfile& profile, const LatticeRegion& region,
                             std::optional<Eigen::VectorXd> rhs) {
    GramSystem sys;
    sys.nodes.reserve(region.size());
    for (const auto& k : region.points()) sys.nodes.push_back(profile.projection().apply(k));
    if (auto dup = find_duplicate(sys.nodes)) {
        const auto& pts = region.points();
        throw Error(ErrorKind::duplicate_node, "lattice points " + point_str(pts[dup->first]) + " and " +
                                                   point_str(pts[dup->second]) + " project to the same node");
    }
    sys.matrix = gram_matrix(profile, sys.nodes);
    if (rhs) {
        if (rhs->size() != Eigen::Index(region.size()))
            throw Error(ErrorKind::domain, "right-hand side length does not match the region");
        sys.rhs = std::move(*rhs);
    } else {
        sys.rhs = Eigen::VectorXd::Zero(Eigen::Index(region.size()));
    }
    const PdCertificate cert = pd_certify(sys.matrix);
    sys.min_eigenvalue = cert.min_eigenvalue;
    sys.condition_estimate = cert.positive_definite ? cert.condition() : std::numeric_limits<double>::infinity();
    return sys;
}

Cholesky::Cholesky(const Eigen::MatrixXd& a) : l_(Eigen::MatrixXd::Zero(a.rows(), a.cols())) {
    const Eigen::Index n = a.rows();
    const double scale = n > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 0.0;
    const double floor = double(n) * std::numeric_limits<double>::epsilon() * scale;
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j) - l_.row(j).head(j).squaredNorm();
        if (!(d > floor)) {
            failed_pivot_ = std::size_t(j);
            return;
        }
        d = std::sqrt(d);
        l_(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i) l_(i, j) = (a(i, j) - l_.row(i).head(j).dot(l_.row(j).head(j))) / d;
    }
}

Eigen::VectorXd Cholesky::solve(const Eigen::VectorXd& b) const {
    if (failed_pivot_) throw Error(ErrorKind::not_positive_definite, "factorization failed at pivot " + std::to_string(*failed_pivot_));
    const auto lower = l_.triangularView<Eigen::Lower>();
    Eigen::VectorXd y = lower.solve(b);
    return lower.transpose().solve(y);
}

PdCertificate pd_certify(const Eigen::MatrixXd& matrix) {
    PdCertificate cert;
    Cholesky chol(matrix);
    if (!chol.ok()) {
        cert.failed_pivot = chol.failed_pivot();
        cert.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
        cert.max_eigenvalue = std::numeric_limits<double>::quiet_NaN();
        return cert;
    }
    cert.positive_definite = true;
    const Eigen::Index n = matrix.rows();
    const double inv_min = power_iteration([&](const Eigen::VectorXd& x) { return chol.solve(x); }, n);
    cert.min_eigenvalue = 1.0 / inv_min;
    cert.max_eigenvalue = power_iteration([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return matrix * x; }, n);
    return cert;
}

PdCertificate pd_certify(const GramSystem& system) { return pd_certify(system.matrix); }

Eigen::VectorXd sample_radon(const CoefficientGrid& coeffs, const BoxSplineGenerator& gen,
                             const ProjectionVector& proj, std::span<const double> nodes) {
    const RadonProfile profile(gen, proj);
    Eigen::VectorXd y(Eigen::Index(nodes.size()));
    for (std::size_t j = 0; j < nodes.size(); ++j) y[Eigen::Index(j)] = radon_f(coeffs, profile, nodes[j]);
    return y;
}

double noise_variance(const Eigen::VectorXd& y, double snr_db) {
    const double power = y.squaredNorm();
    if (power == 0.0) throw Error(ErrorKind::degenerate_signal, "cannot calibrate noise against an all-zero signal");
    return power / (double(y.size()) * std::pow(10.0, snr_db / 10.0));
}

Eigen::VectorXd add_noise(const Eigen::VectorXd& y, double snr_db, std::mt19937_64& rng) {
    const double sigma = std::sqrt(noise_variance(y, snr_db));
    std::normal_distribution<double> normal(0.0, sigma);
    Eigen::VectorXd out = y;
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += normal(rng);
    return out;
}

Eigen::VectorXd add_noise(const Eigen::VectorXd& y, double snr_db, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return add_noise(y, snr_db, rng);
}

Eigen::VectorXd solve_direct(const GramSystem& system) {
    Cholesky chol(system.matrix);
    if (!chol.ok())
        throw Error(ErrorKind::not_positive_definite,
                    "Gram matrix is not positive definite (pivot " + std::to_string(*chol.failed_pivot()) + ")");
    return chol.solve(system.rhs);
}

TikhonovSolver::TikhonovSolver(const Eigen::MatrixXd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u_ = svd.matrixU();
    s_ = svd.singularValues();
    v_ = svd.matrixV();
}

Eigen::VectorXd TikhonovSolver::solve(const Eigen::VectorXd& rhs, double alpha) const {
    if (!(alpha >= 0.0)) throw Error(ErrorKind::domain, "regularization parameter must be nonnegative");
    if (s_.size() == 0) return Eigen::VectorXd::Zero(v_.rows());
    if (alpha == 0.0) {
        const double tiny = double(std::max(u_.rows(), v_.rows())) * std::numeric_limits<double>::epsilon() * s_[0];
        if (!(s_[s_.size() - 1] > tiny))
            throw Error(ErrorKind::singular_system, "alpha = 0 with a numerically singular matrix");
    }
    // s / (s^2 + alpha) for each singular value.
    const Eigen::VectorXd filt = s_.array() / (s_.array().square() + alpha);
    return v_ * (filt.asDiagonal() * (u_.transpose() * rhs));
}

Eigen::VectorXd tikhonov_solve(const GramSystem& system, double alpha) {
    return TikhonovSolver(system.matrix).solve(system.rhs, alpha);
}

Eigen::MatrixXd synthesize(const CoefficientGrid& coeffs, const BoxSplineGenerator& gen, const Grid2D& grid) {
    gen.validate();
    const Eigen::Index n = grid.count;
    if (coeffs.region.empty()) return Eigen::MatrixXd::Zero(n, n);
    const IntBox& b = coeffs.region.bounds();
    const Eigen::Index m1 = b.k1hi - b.k1lo + 1;
    const Eigen::Index m2 = b.k2hi - b.k2lo + 1;

    Eigen::MatrixXd basis1(n, m1), basis2(n, m2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = grid.at(int(i));
        for (Eigen::Index a = 0; a < m1; ++a) basis1(i, a) = eval_centered(gen.n1, x - double(b.k1lo + a));
        for (Eigen::Index a = 0; a < m2; ++a) basis2(i, a) = eval_centered(gen.n2, x - double(b.k2lo + a));
    }
    // values are lexicographic: k1 major, so row-major reshape gives C(k1, k2).
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(
        coeffs.values.data(), m1, m2);
    return basis1 * c * basis2.transpose();
}

double error_metric(const Eigen::MatrixXd& f_hat, const Eigen::MatrixXd& f_ref) {
    if (f_hat.rows() != f_ref.rows() || f_hat.cols() != f_ref.cols())
        throw Error(ErrorKind::domain, "error metric needs matrices of the same shape");
    const double ref = f_ref.norm();
    if (ref == 0.0) throw Error(ErrorKind::degenerate_reference, "reference function is zero on the grid");
    return (f_hat - f_ref).norm() / ref;
}

CollocationResult collocation_solve(const RadonProfile& profile, std::span<const double> sample_nodes,
                                    const LatticeRegion& region, const Eigen::VectorXd& y) {
    const auto rows = Eigen::Index(sample_nodes.size());
    const auto cols = Eigen::Index(region.size());
    if (y.size() != rows) throw Error(ErrorKind::domain, "sample vector length does not match the sample nodes");
    if (rows < cols)
        throw Error(ErrorKind::determinability, "only " + std::to_string(rows) + " samples for " +
                                                    std::to_string(cols) + " unknowns (numerical rank <= " +
                                                    std::to_string(rows) + ")");
    Eigen::MatrixXd m(rows, cols);
    const auto& pts = region.points();
    for (Eigen::Index a = 0; a < cols; ++a) {
        const double shift = profile.projection().apply(pts[std::size_t(a)]);
        for (Eigen::Index j = 0; j < rows; ++j) m(j, a) = profile(sample_nodes[std::size_t(j)] - shift);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    CollocationResult out;
    out.rank = svd.rank();
    if (out.rank < cols)
        throw Error(ErrorKind::determinability,
                    "collocation matrix has numerical rank " + std::to_string(out.rank) + " < " + std::to_string(cols));
    out.values = svd.solve(y);
    out.residual_norm = (m * out.values - y).norm();
    return out;
}

}  // namespace saradon
