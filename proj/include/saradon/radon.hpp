#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "saradon/geometry.hpp"
#include "saradon/splines.hpp"

namespace saradon {

/// Integer vector P~ with P~ = gamma * p.
struct IntegerLift {
    long p1 = 0;
    long p2 = 0;
    double gamma = 0.0;
};

/// Unit direction p = (cos theta, sin theta), optionally with an integer lift.
class ProjectionVector {
public:
    /// theta is reduced to [0, 2 pi).
    static ProjectionVector from_angle(double theta);

    /// Direction of an integer vector; gamma = ||P~||_2. Throws invalid_projection on (0, 0).
    static ProjectionVector from_integer(long p1, long p2);

    double theta() const { return theta_; }
    const std::array<double, 2>& p() const { return p_; }
    double p1() const { return p_[0]; }
    double p2() const { return p_[1]; }
    const std::optional<IntegerLift>& integer_lift() const { return lift_; }

    /// P . k
    double apply(const LatticePoint& k) const { return p_[0] * double(k[0]) + p_[1] * double(k[1]); }

private:
    ProjectionVector() = default;

    double theta_ = 0.0;
    std::array<double, 2> p_{1.0, 0.0};
    std::optional<IntegerLift> lift_;
};

/// Evaluable 2-D function vanishing outside `support`. Optional breakpoint lines
/// x1 = c and x2 = c (where f is not smooth) let the line integrator split panels.
struct Function2D {
    std::function<double(double, double)> eval;
    Box support;
    std::vector<double> breaks_x1;
    std::vector<double> breaks_x2;
};

/// phi_B as a Function2D with its integer knot lines.
Function2D box_spline_function(const BoxSplineGenerator& gen);

/// f = sum_k c_k phi_B(. - k) as a Function2D.
Function2D synthesized_function(const CoefficientGrid& coeffs, const BoxSplineGenerator& gen);

/// Radon transform of f along direction proj at offset t:
///   integral over s of f(t cos - s sin, t sin + s cos),
/// restricted to the part of the line inside f.support and integrated by adaptive
/// Gauss-Kronrod on panels split at the mapped breakpoints. Independent of the
/// analytic profile routines below.
double radon_line_integral(const Function2D& f, const ProjectionVector& proj, double t, double tol = 1e-10);

/// Radon transform with an unnormalised direction P~ = gamma p:
///   P~f(s) = Pf(s / gamma) / gamma.
double radon_line_integral_lifted(const Function2D& f, std::array<double, 2> ptilde, double s,
                                  double tol = 1e-10);

/// P phi_B(t) as the 1-D convolution of the two dilated centered B-splines,
/// integrated exactly by breakpoint-aligned Gauss-Legendre panels.
double radon_box_analytic(const BoxSplineGenerator& gen, const ProjectionVector& proj, double t);

enum class ClosedFormVariant {
    /// Branch x in [-sin, -sin + cos) uses (3 - tan - x / cos), the mirror of
    /// the (sin - cos, sin] branch.
    corrected,
    /// Same branches with the (3 - tan - x) factor in that branch; kept for comparison.
    uncorrected,
};

/// Piecewise-polynomial P phi_B for n1 = n2 = 1 and tan(theta) >= 2.
/// Throws Error(domain) outside the wedge [atan 2, pi/2).
double radon_box_closedform_n1(double theta, double x,
                               ClosedFormVariant variant = ClosedFormVariant::corrected);

/// Per-branch comparison of the closed form against the line-integral oracle.
struct ClosedFormBranchReport {
    int branch = 0;  // 1..8, left to right
    Interval range;
    int samples = 0;
    double max_abs_error = 0.0;
};

struct ClosedFormReport {
    double theta = 0.0;
    ClosedFormVariant variant = ClosedFormVariant::corrected;
    std::vector<ClosedFormBranchReport> branches;
    double max_abs_error = 0.0;

    /// Branches whose deviation exceeds `tol`.
    std::vector<int> failing_branches(double tol) const;
};

ClosedFormReport closed_form_diagnostics(double theta, ClosedFormVariant variant, int samples_per_branch = 64);

/// Exact support half-width r = n1 |p1| + n2 |p2| of P phi_B.
double profile_radius(const BoxSplineGenerator& gen, const std::array<double, 2>& p);

enum class ProfileMethod { analytic_convolution, closed_form_n1, quadrature };

const char* to_string(ProfileMethod m) noexcept;

/// The evaluable 1-D function P phi_B. Immutable.
class RadonProfile {
public:
    /// closed_form_n1 requires n1 = n2 = 1 and theta in the closed-form wedge.
    RadonProfile(BoxSplineGenerator gen, ProjectionVector proj,
                 ProfileMethod method = ProfileMethod::analytic_convolution);

    double operator()(double t) const;

    const BoxSplineGenerator& generator() const { return gen_; }
    const ProjectionVector& projection() const { return proj_; }
    ProfileMethod method() const { return method_; }
    Interval support() const { return Interval{-radius_, radius_}; }

    /// Sorted knots of the piecewise polynomial: i |p1| + j |p2| with |i| <= n1, |j| <= n2.
    std::vector<double> breakpoints() const;

private:
    BoxSplineGenerator gen_;
    ProjectionVector proj_;
    ProfileMethod method_;
    double radius_;
    Function2D box_;
};

/// Pf(t) = sum_k c_k P phi_B(t - P k).
double radon_f(const CoefficientGrid& coeffs, const BoxSplineGenerator& gen, const ProjectionVector& proj, double t);

/// Same sum with a prebuilt profile.
double radon_f(const CoefficientGrid& coeffs, const RadonProfile& profile, double t);

/// Symmetric interval sqrt(2) ||P~|| max{|a_i|, |b_i|} containing supp(P~f) for f supported in `box`.
Interval support_bound(std::array<double, 2> ptilde, const Box& box);

/// Fourier transform of Pf at xi: phi_B^(xi p) * sum_k c_k exp(-i (P k) xi).
std::complex<double> fourier_slice(const BoxSplineGenerator& gen, const CoefficientGrid& coeffs,
                                   const ProjectionVector& proj, double xi);

}  // namespace saradon
