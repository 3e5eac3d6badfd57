#include "saradon/geometry.hpp"

#include <string>

#include "saradon/error.hpp"

namespace saradon {

LatticeRegion::LatticeRegion(IntBox bounds) : bounds_(bounds) {
    if (bounds_.empty()) return;
    points_.reserve(std::size_t(bounds_.k1hi - bounds_.k1lo + 1) * std::size_t(bounds_.k2hi - bounds_.k2lo + 1));
    for (long k1 = bounds_.k1lo; k1 <= bounds_.k1hi; ++k1)
        for (long k2 = bounds_.k2lo; k2 <= bounds_.k2hi; ++k2) points_.push_back({k1, k2});
}

long LatticeRegion::index_of(const LatticePoint& k) const {
    if (empty() || k[0] < bounds_.k1lo || k[0] > bounds_.k1hi || k[1] < bounds_.k2lo || k[1] > bounds_.k2hi)
        return -1;
    return (k[0] - bounds_.k1lo) * (bounds_.k2hi - bounds_.k2lo + 1) + (k[1] - bounds_.k2lo);
}

LatticeRegion LatticeRegion::shifted(long m1, long m2) const {
    return LatticeRegion(IntBox{bounds_.k1lo + m1, bounds_.k1hi + m1, bounds_.k2lo + m2, bounds_.k2hi + m2});
}

CoefficientGrid::CoefficientGrid(LatticeRegion r, std::vector<double> v) : region(std::move(r)), values(std::move(v)) {
    if (values.size() != region.size())
        throw Error(ErrorKind::config, "coefficient count " + std::to_string(values.size()) +
                                           " does not match region size " + std::to_string(region.size()));
}

CoefficientGrid CoefficientGrid::zeros(LatticeRegion r) {
    std::vector<double> v(r.size(), 0.0);
    return CoefficientGrid(std::move(r), std::move(v));
}

}  // namespace saradon
