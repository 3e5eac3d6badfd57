#include "saradon/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "saradon/error.hpp"

namespace saradon {

LatticeRegion compute_region(const Box& E, const Box& gen_support) {
    if (E.empty() || gen_support.empty()) throw Error(ErrorKind::domain, "rectangles must satisfy a_i <= b_i");
    return LatticeRegion(IntBox{
        long(std::ceil(E.a1 - gen_support.b1)),
        long(std::floor(E.b1 - gen_support.a1)),
        long(std::ceil(E.a2 - gen_support.b2)),
        long(std::floor(E.b2 - gen_support.a2)),
    });
}

ProjectionVector design_projection(const LatticeRegion& region) {
    if (region.empty()) throw Error(ErrorKind::empty_region, "cannot design a projection for an empty region");
    // Largest |first coordinate| over the difference set {k - k'}.
    const long spread1 = region.bounds().k1hi - region.bounds().k1lo;
    return ProjectionVector::from_integer(1, spread1 + 1);
}

DesignCertificate check_injectivity(const ProjectionVector& proj, const LatticeRegion& region) {
    return check_injectivity(proj, std::span<const LatticePoint>(region.points()));
}

DesignCertificate check_injectivity(const ProjectionVector& proj, std::span<const LatticePoint> pts) {
    DesignCertificate cert{proj, false, false, 0.0, std::nullopt};
    const auto& lift = proj.integer_lift();
    if (lift) cert.a2_lattice = check_lattice_condition(lift->p1, lift->p2);

    cert.a1_injective = true;
    cert.min_node_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const long d1 = pts[i][0] - pts[j][0];
            const long d2 = pts[i][1] - pts[j][1];
            bool collide = false;
            double gap = 0.0;
            if (lift) {
                const long v = lift->p1 * d1 + lift->p2 * d2;
                collide = v == 0;
                gap = std::abs(double(v)) / lift->gamma;
            } else {
                gap = std::abs(proj.p1() * double(d1) + proj.p2() * double(d2));
                collide = gap <= 1e-9 * std::max(1.0, std::hypot(double(d1), double(d2)));
            }
            cert.min_node_gap = std::min(cert.min_node_gap, gap);
            if (collide && cert.a1_injective) {
                cert.a1_injective = false;
                cert.collision = std::array<LatticePoint, 2>{pts[i], pts[j]};
            }
        }
    }
    if (pts.size() < 2) cert.min_node_gap = std::numeric_limits<double>::infinity();
    return cert;
}

bool check_lattice_condition(long p1, long p2) {
    if (p1 == 0 && p2 == 0) throw Error(ErrorKind::invalid_projection, "integer projection vector is zero");
    return std::gcd(p1, p2) == 1;
}

Interval sample_window(const DesignCertificate& cert, const LatticeRegion& region, const Box& gen_support,
                       SampleWindow window) {
    const auto& lift = cert.projection.integer_lift();
    if (!lift) throw Error(ErrorKind::uncertified_projection, "sample set needs an integer lift");
    if (region.empty()) throw Error(ErrorKind::empty_region, "sample set of an empty region");
    long kmin = std::numeric_limits<long>::max();
    long kmax = std::numeric_limits<long>::min();
    for (const auto& k : region.points()) {
        const long v = lift->p1 * k[0] + lift->p2 * k[1];
        kmin = std::min(kmin, v);
        kmax = std::max(kmax, v);
    }
    if (window == SampleWindow::as_stated) {
        const double m = std::max({std::abs(gen_support.a1), std::abs(gen_support.b1), std::abs(gen_support.a2),
                                   std::abs(gen_support.b2)});
        return Interval{-std::sqrt(2.0) * m + double(kmin), std::sqrt(2.0) * m + double(kmax)};
    }
    const auto& p = cert.projection.p();
    const double r = std::max(std::abs(gen_support.a1), std::abs(gen_support.b1)) * std::abs(p[0]) +
                     std::max(std::abs(gen_support.a2), std::abs(gen_support.b2)) * std::abs(p[1]);
    return Interval{double(kmin) / lift->gamma - r, double(kmax) / lift->gamma + r};
}

std::vector<double> shifted_sample_set(std::span<const double> shifts, const DesignCertificate& cert,
                                        const LatticeRegion& region, const Box& gen_support, SampleWindow window) {
    if (shifts.size() < 2)
        throw Error(ErrorKind::insufficient_shift_set, "need at least two shifts, got " + std::to_string(shifts.size()));
    for (double x : shifts)
        if (!(x > 0.0 && x < 1.0)) throw Error(ErrorKind::domain, "shifts must lie in (0, 1)");
    if (!cert.a1_injective || !cert.a2_lattice || !cert.projection.integer_lift())
        throw Error(ErrorKind::uncertified_projection, "projection must be certified injective with gcd 1");

    const double gamma = cert.projection.integer_lift()->gamma;
    const Interval w = sample_window(cert, region, gen_support, window);
    std::vector<double> nodes;
    for (double x : shifts) {
        // (x + z) / gamma in [lo, hi]  <=>  z in [lo gamma - x, hi gamma - x]
        const long zlo = long(std::ceil(w.lo * gamma - x));
        const long zhi = long(std::floor(w.hi * gamma - x));
        for (long z = zlo; z <= zhi; ++z) {
            const double node = (x + double(z)) / gamma;
            if (w.contains(node)) nodes.push_back(node);
        }
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

}  // namespace saradon
