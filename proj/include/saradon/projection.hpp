#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "saradon/geometry.hpp"
#include "saradon/radon.hpp"

namespace saradon {

/// Index set of coefficients compatible with support box E for a generator
/// supported on gen_support = [N1, M1] x [N2, M2]:
///   k_i in [ceil(a_i - M_i), floor(b_i - N_i)].
/// The region may be empty. Throws Error(domain) if either rectangle is inverted.
LatticeRegion compute_region(const Box& E, const Box& gen_support);

/// P~ = [1, max_{k,k'} |k1 - k1'| + 1], P = P~ / ||P~||. Satisfies injectivity on
/// the region and {P~ x : x in Z^2} = Z.
ProjectionVector design_projection(const LatticeRegion& region);

struct DesignCertificate {
    ProjectionVector projection;
    bool a1_injective = false;
    bool a2_lattice = false;
    double min_node_gap = 0.0;
    /// First colliding pair when not injective.
    std::optional<std::array<LatticePoint, 2>> collision;
};

/// Exhaustive pairwise check that k -> P k is injective on the region. Exact integer
/// arithmetic with an integer lift, otherwise |P (k - k')| > 1e-9 max(1, ||k - k'||).
/// min_node_gap is measured in units of the unit direction P.
DesignCertificate check_injectivity(const ProjectionVector& proj, const LatticeRegion& region);
DesignCertificate check_injectivity(const ProjectionVector& proj, std::span<const LatticePoint> points);

/// gcd(|p1|, |p2|) == 1, i.e. P~ maps Z^2 onto Z.
bool check_lattice_condition(long p1, long p2);

enum class SampleWindow {
    /// [-sqrt2 max|N_i|,|M_i| + K_min, sqrt2 max + K_max] with K from P~ k.
    as_stated,
    /// [K_min / gamma - r, K_max / gamma + r] with r the exact profile radius.
    tight,
};

/// Sample positions (X + Z) / gamma inside the window, sorted ascending.
/// X must hold at least two shifts in (0, 1). The certificate must certify the
/// same projection (both conditions).
std::vector<double> shifted_sample_set(std::span<const double> shifts, const DesignCertificate& cert,
                                        const LatticeRegion& region, const Box& gen_support,
                                        SampleWindow window = SampleWindow::as_stated);

/// Window used by shifted_sample_set, in the coordinates of the unit direction.
Interval sample_window(const DesignCertificate& cert, const LatticeRegion& region, const Box& gen_support,
                       SampleWindow window);

}  // namespace saradon
