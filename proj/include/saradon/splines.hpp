#pragma once

#include "saradon/geometry.hpp"

namespace saradon {

/// Tensor-product box-spline phi_B(x1, x2) = phi_{2 n1}(x1) * phi_{2 n2}(x2),
/// where phi_{2n} is the centered cardinal B-spline of order 2n.
struct BoxSplineGenerator {
    int n1 = 1;
    int n2 = 1;

    /// Throws Error(invalid_order) unless both half-orders are positive.
    void validate() const;

    /// Exact support [-n1, n1] x [-n2, n2].
    Box support() const { return Box{-double(n1), double(n1), -double(n2), double(n2)}; }

    friend bool operator==(const BoxSplineGenerator&, const BoxSplineGenerator&) = default;
};

/// Cardinal B-spline B_m = chi_(0,1] * ... * chi_(0,1] (m factors), evaluated by the
/// two-term convolution recurrence. Support [0, m]; B_1 keeps the half-open (0, 1].
double eval_bspline(int m, double x);

/// phi_{2n}(x) = B_{2n}(x + n). Even, supported on [-n, n].
double eval_centered(int n, double x);

double eval_box(const BoxSplineGenerator& gen, double x1, double x2);

/// sin(u)/u with a Taylor branch near zero.
double sinc(double u);

/// Fourier transform of phi_B: prod_k sinc(xi_k / 2)^{2 n_k}.
double fourier_box(const BoxSplineGenerator& gen, double xi1, double xi2);

}  // namespace saradon
