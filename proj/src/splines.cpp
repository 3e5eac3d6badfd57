#include "saradon/splines.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "saradon/error.hpp"

namespace saradon {

void BoxSplineGenerator::validate() const {
    if (n1 < 1 || n2 < 1)
        throw Error(ErrorKind::invalid_order,
                    "box-spline half-orders must be positive, got (" + std::to_string(n1) + ", " + std::to_string(n2) + ")");
}

double eval_bspline(int m, double x) {
    if (m < 1) throw Error(ErrorKind::invalid_order, "B-spline order must be >= 1, got " + std::to_string(m));
    if (!(x > 0.0) || x > double(m)) return 0.0;

    // v[j] holds B_k(x - j); start from the indicator of (0, 1].
    std::vector<double> v(std::size_t(m), 0.0);
    for (int j = 0; j < m; ++j) {
        const double y = x - j;
        v[std::size_t(j)] = (y > 0.0 && y <= 1.0) ? 1.0 : 0.0;
    }
    for (int k = 2; k <= m; ++k) {
        const double inv = 1.0 / double(k - 1);
        for (int j = 0; j <= m - k; ++j) {
            const double y = x - j;
            v[std::size_t(j)] = (y * v[std::size_t(j)] + (k - y) * v[std::size_t(j) + 1]) * inv;
        }
    }
    return v[0];
}

double eval_centered(int n, double x) {
    if (n < 1) throw Error(ErrorKind::invalid_order, "centered B-spline half-order must be >= 1, got " + std::to_string(n));
    // Evaluate on |x| so that evenness holds bit-exactly.
    const double a = std::abs(x);
    if (a >= double(n)) return 0.0;
    return eval_bspline(2 * n, double(n) - a);
}

double eval_box(const BoxSplineGenerator& gen, double x1, double x2) {
    const double f1 = eval_centered(gen.n1, x1);
    if (f1 == 0.0) return 0.0;
    return f1 * eval_centered(gen.n2, x2);
}

double sinc(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0));
    }
    return std::sin(u) / u;
}

double fourier_box(const BoxSplineGenerator& gen, double xi1, double xi2) {
    return std::pow(sinc(0.5 * xi1), 2 * gen.n1) * std::pow(sinc(0.5 * xi2), 2 * gen.n2);
}

}  // namespace saradon
