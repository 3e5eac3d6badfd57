#include "saradon/radon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "saradon/error.hpp"

namespace saradon {

namespace {

constexpr double kDegenerate = 1e-12;

using Gauss16 = boost::math::quadrature::gauss<double, 16>;
using Kronrod31 = boost::math::quadrature::gauss_kronrod<double, 31>;

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Sums Gauss-Legendre panels of g over the sorted cut points inside [lo, hi].
template <class F>
double integrate_panels(F&& g, double lo, double hi, std::vector<double> cuts) {
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::erase_if(cuts, [&](double c) { return c < lo || c > hi; });
    sort_unique(cuts);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += Gauss16::integrate(g, cuts[i], cuts[i + 1]);
    return sum;
}

// Bisection on the Kronrod error estimate with an absolute tolerance.
template <class F>
double integrate_adaptive(F& f, double a, double b, double tol, int depth) {
    double err = 0.0;
    const double v = Kronrod31::integrate(f, a, b, 0, 0.0, &err);
    if (err <= tol || depth == 0 || !std::isfinite(v)) return v;
    const double m = 0.5 * (a + b);
    return integrate_adaptive(f, a, m, 0.5 * tol, depth - 1) + integrate_adaptive(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

ProjectionVector ProjectionVector::from_angle(double theta) {
    if (!std::isfinite(theta)) throw Error(ErrorKind::invalid_projection, "angle must be finite");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double reduced = std::fmod(theta, two_pi);
    if (reduced < 0.0) reduced += two_pi;
    if (reduced >= two_pi) reduced = 0.0;
    ProjectionVector pv;
    pv.theta_ = reduced;
    pv.p_ = {std::cos(theta), std::sin(theta)};
    return pv;
}

ProjectionVector ProjectionVector::from_integer(long p1, long p2) {
    if (p1 == 0 && p2 == 0) throw Error(ErrorKind::invalid_projection, "integer projection vector is zero");
    const double gamma = std::hypot(double(p1), double(p2));
    ProjectionVector pv = from_angle(std::atan2(double(p2), double(p1)));
    pv.p_ = {double(p1) / gamma, double(p2) / gamma};
    pv.lift_ = IntegerLift{p1, p2, gamma};
    return pv;
}

Function2D box_spline_function(const BoxSplineGenerator& gen) {
    gen.validate();
    Function2D f;
    f.eval = [gen](double x1, double x2) { return eval_box(gen, x1, x2); };
    f.support = gen.support();
    for (int i = -gen.n1; i <= gen.n1; ++i) f.breaks_x1.push_back(i);
    for (int j = -gen.n2; j <= gen.n2; ++j) f.breaks_x2.push_back(j);
    return f;
}

Function2D synthesized_function(const CoefficientGrid& coeffs, const BoxSplineGenerator& gen) {
    gen.validate();
    const IntBox b = coeffs.region.bounds();
    Function2D f;
    if (coeffs.region.empty()) {
        f.eval = [](double, double) { return 0.0; };
        return f;
    }
    f.support = Box{double(b.k1lo - gen.n1), double(b.k1hi + gen.n1), double(b.k2lo - gen.n2), double(b.k2hi + gen.n2)};
    for (long i = b.k1lo - gen.n1; i <= b.k1hi + gen.n1; ++i) f.breaks_x1.push_back(double(i));
    for (long j = b.k2lo - gen.n2; j <= b.k2hi + gen.n2; ++j) f.breaks_x2.push_back(double(j));
    f.eval = [coeffs, gen](double x1, double x2) {
        const IntBox& bb = coeffs.region.bounds();
        const long lo1 = std::max(bb.k1lo, long(std::floor(x1)) - gen.n1);
        const long hi1 = std::min(bb.k1hi, long(std::ceil(x1)) + gen.n1);
        const long lo2 = std::max(bb.k2lo, long(std::floor(x2)) - gen.n2);
        const long hi2 = std::min(bb.k2hi, long(std::ceil(x2)) + gen.n2);
        double sum = 0.0;
        for (long k1 = lo1; k1 <= hi1; ++k1) {
            const double f1 = eval_centered(gen.n1, x1 - double(k1));
            if (f1 == 0.0) continue;
            for (long k2 = lo2; k2 <= hi2; ++k2) {
                const double c = coeffs.values[std::size_t(coeffs.region.index_of({k1, k2}))];
                sum += c * f1 * eval_centered(gen.n2, x2 - double(k2));
            }
        }
        return sum;
    };
    return f;
}

double radon_line_integral(const Function2D& f, const ProjectionVector& proj, double t, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorKind::domain, "line integral tolerance must be positive");
    if (f.support.empty()) return 0.0;
    const double c = proj.p1();
    const double sn = proj.p2();
    const Box& box = f.support;

    // Line: x(s) = (t c - s sn, t sn + s c).
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    auto clip = [&](double u, double v) {
        lo = std::max(lo, std::min(u, v));
        hi = std::min(hi, std::max(u, v));
    };
    if (sn != 0.0) {
        clip((t * c - box.b1) / sn, (t * c - box.a1) / sn);
    } else if (t * c < box.a1 || t * c > box.b1) {
        return 0.0;
    }
    if (c != 0.0) {
        clip((box.a2 - t * sn) / c, (box.b2 - t * sn) / c);
    } else if (t * sn < box.a2 || t * sn > box.b2) {
        return 0.0;
    }
    if (!(lo < hi)) return 0.0;

    std::vector<double> cuts{lo, hi};
    if (sn != 0.0)
        for (double j : f.breaks_x1) cuts.push_back((t * c - j) / sn);
    if (c != 0.0)
        for (double j : f.breaks_x2) cuts.push_back((j - t * sn) / c);
    std::erase_if(cuts, [&](double s) { return !(s >= lo && s <= hi); });
    sort_unique(cuts);

    auto integrand = [&](double s) { return f.eval(t * c - s * sn, t * sn + s * c); };
    const double panel_tol = tol / double(std::max<std::size_t>(1, cuts.size() - 1));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] <= 0.0) continue;
        sum += integrate_adaptive(integrand, cuts[i], cuts[i + 1], panel_tol, 20);
    }
    if (!std::isfinite(sum)) throw Error(ErrorKind::numeric, "non-finite value in line integral at t = " + std::to_string(t));
    return sum;
}

double radon_line_integral_lifted(const Function2D& f, std::array<double, 2> ptilde, double s, double tol) {
    const double gamma = std::hypot(ptilde[0], ptilde[1]);
    if (gamma == 0.0) throw Error(ErrorKind::invalid_projection, "projection vector is zero");
    const ProjectionVector unit = ProjectionVector::from_angle(std::atan2(ptilde[1], ptilde[0]));
    return radon_line_integral(f, unit, s / gamma, tol * gamma) / gamma;
}

double radon_box_analytic(const BoxSplineGenerator& gen, const ProjectionVector& proj, double t) {
    gen.validate();
    const double a1 = std::abs(proj.p1());
    const double a2 = std::abs(proj.p2());
    if (a1 < kDegenerate && a2 < kDegenerate) throw Error(ErrorKind::invalid_projection, "projection vector is zero");
    if (a2 < kDegenerate) return eval_centered(gen.n1, t / a1) / a1;
    if (a1 < kDegenerate) return eval_centered(gen.n2, t / a2) / a2;

    const double r = gen.n1 * a1 + gen.n2 * a2;
    if (std::abs(t) >= r) return 0.0;

    const double lo = std::max(-gen.n1 * a1, t - gen.n2 * a2);
    const double hi = std::min(gen.n1 * a1, t + gen.n2 * a2);
    if (!(lo < hi)) return 0.0;

    std::vector<double> cuts;
    for (int i = -gen.n1; i <= gen.n1; ++i) cuts.push_back(i * a1);
    for (int j = -gen.n2; j <= gen.n2; ++j) cuts.push_back(t - j * a2);

    auto g = [&](double u) { return eval_centered(gen.n1, u / a1) * eval_centered(gen.n2, (t - u) / a2); };
    return integrate_panels(g, lo, hi, std::move(cuts)) / (a1 * a2);
}

namespace {

struct Branch {
    Interval range;
    bool open_lo;
    bool open_hi;
};

// Branch ranges of the n = 1 closed form.
std::array<Branch, 8> closed_form_branches(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {{
        {{s, s + c}, true, true},
        {{s - c, s}, true, false},
        {{c, s - c}, false, false},
        {{0.0, c}, true, true},
        {{-c, 0.0}, true, false},
        {{-s + c, -c}, false, false},
        {{-s, -s + c}, false, true},
        {{-s - c, -s}, true, true},
    }};
}

bool in_branch(const Branch& b, double x) {
    const bool lo_ok = b.open_lo ? x > b.range.lo : x >= b.range.lo;
    const bool hi_ok = b.open_hi ? x < b.range.hi : x <= b.range.hi;
    return lo_ok && hi_ok;
}

void check_wedge(double theta) {
    const double lo = std::atan(2.0);
    const double hi = std::numbers::pi / 2;
    if (!(theta >= lo && theta < hi))
        throw Error(ErrorKind::domain, "closed form requires theta in [atan 2, pi/2) (tan theta >= 2), got " +
                                           std::to_string(theta) + "; use radon_box_analytic");
}

}  // namespace

double radon_box_closedform_n1(double theta, double x, ClosedFormVariant variant) {
    check_wedge(theta);
    const double c = std::cos(theta);
    const double tn = std::tan(theta);
    const double y = x / c;
    const double d6 = 6.0 * c * tn * tn;
    const double d1 = c * tn * tn;
    const auto br = closed_form_branches(theta);

    if (in_branch(br[0], x)) {
        const double q = y - tn - 1.5;
        return ((tn - y) * (q * q + 0.75) + 1.0) / d6;
    }
    if (in_branch(br[1], x)) {
        const double w = y - tn;
        return (3.0 * w * w + w * w * w + 3.0 * tn - 3.0 * y + 1.0) / d6;
    }
    if (in_branch(br[2], x)) return (tn - y) / d1;
    if (in_branch(br[3], x)) return (y * (2.0 * y * y - 6.0 * y + 3.0) + 6.0 * tn - 3.0 * y - 2.0) / d6;
    if (in_branch(br[4], x)) {
        const double w = y + 1.0;
        return (6.0 * tn + 6.0 * y - 2.0 * w * w * w) / d6;
    }
    if (in_branch(br[5], x)) return (tn + y) / d1;
    if (in_branch(br[6], x)) {
        const double w = tn + y;
        const double lead = variant == ClosedFormVariant::uncorrected ? 3.0 - tn - x : 3.0 - tn - y;
        return (3.0 * tn + 3.0 * y + 1.0 + lead * w * w) / d6;
    }
    if (in_branch(br[7], x)) {
        const double w = tn + y + 1.0;
        return w * w * w / d6;
    }
    return 0.0;
}

std::vector<int> ClosedFormReport::failing_branches(double tol) const {
    std::vector<int> out;
    for (const auto& b : branches)
        if (b.max_abs_error > tol) out.push_back(b.branch);
    return out;
}

ClosedFormReport closed_form_diagnostics(double theta, ClosedFormVariant variant, int samples_per_branch) {
    check_wedge(theta);
    const Function2D phi = box_spline_function(BoxSplineGenerator{1, 1});
    const ProjectionVector proj = ProjectionVector::from_angle(theta);
    ClosedFormReport report;
    report.theta = theta;
    report.variant = variant;
    const auto br = closed_form_branches(theta);
    for (std::size_t b = 0; b < br.size(); ++b) {
        ClosedFormBranchReport row;
        row.branch = int(b) + 1;
        row.range = br[b].range;
        const double len = br[b].range.length();
        if (len > 0.0) {
            for (int i = 0; i < samples_per_branch; ++i) {
                const double x = br[b].range.lo + len * (i + 0.5) / samples_per_branch;
                const double err = std::abs(radon_box_closedform_n1(theta, x, variant) - radon_line_integral(phi, proj, x, 1e-13));
                row.max_abs_error = std::max(row.max_abs_error, err);
                ++row.samples;
            }
        }
        report.max_abs_error = std::max(report.max_abs_error, row.max_abs_error);
        report.branches.push_back(row);
    }
    return report;
}

double profile_radius(const BoxSplineGenerator& gen, const std::array<double, 2>& p) {
    return gen.n1 * std::abs(p[0]) + gen.n2 * std::abs(p[1]);
}

const char* to_string(ProfileMethod m) noexcept {
    switch (m) {
        case ProfileMethod::analytic_convolution: return "analytic-convolution";
        case ProfileMethod::closed_form_n1: return "closed-form-n1";
        case ProfileMethod::quadrature: return "quadrature";
    }
    return "unknown";
}

RadonProfile::RadonProfile(BoxSplineGenerator gen, ProjectionVector proj, ProfileMethod method)
    : gen_(gen), proj_(std::move(proj)), method_(method), radius_(profile_radius(gen, proj_.p())) {
    gen_.validate();
    if (method_ == ProfileMethod::closed_form_n1) {
        if (gen_.n1 != 1 || gen_.n2 != 1)
            throw Error(ErrorKind::domain, "closed-form profile is only available for n1 = n2 = 1");
        check_wedge(proj_.theta());
    }
    if (method_ == ProfileMethod::quadrature) box_ = box_spline_function(gen_);
}

double RadonProfile::operator()(double t) const {
    if (std::abs(t) > radius_) return 0.0;
    switch (method_) {
        case ProfileMethod::analytic_convolution: return radon_box_analytic(gen_, proj_, t);
        case ProfileMethod::closed_form_n1: return radon_box_closedform_n1(proj_.theta(), t);
        case ProfileMethod::quadrature: return radon_line_integral(box_, proj_, t, 1e-13);
    }
    return 0.0;
}

std::vector<double> RadonProfile::breakpoints() const {
    const double a1 = std::abs(proj_.p1());
    const double a2 = std::abs(proj_.p2());
    std::vector<double> out;
    for (int i = -gen_.n1; i <= gen_.n1; ++i)
        for (int j = -gen_.n2; j <= gen_.n2; ++j) out.push_back(i * a1 + j * a2);
    sort_unique(out);
    return out;
}

double radon_f(const CoefficientGrid& coeffs, const RadonProfile& profile, double t) {
    const auto& pts = coeffs.region.points();
    const double r = profile.support().hi;
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (coeffs.values[i] == 0.0) continue;
        const double d = t - profile.projection().apply(pts[i]);
        if (std::abs(d) >= r) continue;
        sum += coeffs.values[i] * profile(d);
    }
    return sum;
}

double radon_f(const CoefficientGrid& coeffs, const BoxSplineGenerator& gen, const ProjectionVector& proj, double t) {
    return radon_f(coeffs, RadonProfile(gen, proj), t);
}

Interval support_bound(std::array<double, 2> ptilde, const Box& box) {
    const double norm = std::hypot(ptilde[0], ptilde[1]);
    if (norm == 0.0) throw Error(ErrorKind::invalid_projection, "projection vector is zero");
    const double m = std::max({std::abs(box.a1), std::abs(box.b1), std::abs(box.a2), std::abs(box.b2)});
    const double h = std::sqrt(2.0) * norm * m;
    return Interval{-h, h};
}

std::complex<double> fourier_slice(const BoxSplineGenerator& gen, const CoefficientGrid& coeffs,
                                   const ProjectionVector& proj, double xi) {
    std::complex<double> phase_sum{0.0, 0.0};
    const auto& pts = coeffs.region.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
        phase_sum += coeffs.values[i] * std::polar(1.0, -proj.apply(pts[i]) * xi);
    return fourier_box(gen, xi * proj.p1(), xi * proj.p2()) * phase_sum;
}

}  // namespace saradon
