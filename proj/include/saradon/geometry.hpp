#pragma once

#include <array>
#include <vector>

namespace saradon {

/// Closed real rectangle [a1, b1] x [a2, b2].
struct Box {
    double a1 = 0.0;
    double b1 = 0.0;
    double a2 = 0.0;
    double b2 = 0.0;

    bool empty() const { return a1 > b1 || a2 > b2; }
    bool contains(double x1, double x2) const {
        return x1 >= a1 && x1 <= b1 && x2 >= a2 && x2 <= b2;
    }

    friend bool operator==(const Box&, const Box&) = default;
};

/// Closed real interval.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double t) const { return t >= lo && t <= hi; }
    bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
    double length() const { return hi - lo; }
};

using LatticePoint = std::array<long, 2>;

/// Integer rectangle [k1lo, k1hi] x [k2lo, k2hi]; empty when lo > hi on either axis.
struct IntBox {
    long k1lo = 0;
    long k1hi = -1;
    long k2lo = 0;
    long k2hi = -1;

    bool empty() const { return k1lo > k1hi || k2lo > k2hi; }
    friend bool operator==(const IntBox&, const IntBox&) = default;
};

/// Finite index set of lattice points in a rectangle, lexicographically ordered
/// (k1 major, k2 minor). Ordering is global and fixes node indices everywhere.
class LatticeRegion {
public:
    LatticeRegion() = default;
    explicit LatticeRegion(IntBox bounds);

    const IntBox& bounds() const { return bounds_; }
    const std::vector<LatticePoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    /// Position of k in points(), or -1 when outside.
    long index_of(const LatticePoint& k) const;

    /// Region translated by an integer vector.
    LatticeRegion shifted(long m1, long m2) const;

    friend bool operator==(const LatticeRegion& a, const LatticeRegion& b) { return a.bounds_ == b.bounds_; }

private:
    IntBox bounds_;
    std::vector<LatticePoint> points_;
};

/// Finitely supported coefficients c_k, k in region, defining
/// f = sum_k c_k phi_B(. - k).
struct CoefficientGrid {
    LatticeRegion region;
    std::vector<double> values;

    CoefficientGrid() = default;
    CoefficientGrid(LatticeRegion r, std::vector<double> v);

    /// All-zero grid on the region.
    static CoefficientGrid zeros(LatticeRegion r);
};

/// Uniform 2-D sample lattice x_i = origin + step * i, i < count, same on both axes.
struct Grid2D {
    double origin = -2.0;
    double step = 0.1;
    int count = 81;

    double at(int i) const { return origin + step * i; }
    friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

}  // namespace saradon
