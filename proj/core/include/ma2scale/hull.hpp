#pragma once

#include "ma2scale/geometry.hpp"

#include <span>
#include <vector>

namespace ma2 {

/// Lower convex hull of lifted points (p_i, z_i) whose projections trace a
/// convex polygon loop in counterclockwise order (collinear runs along the
/// polygon sides are allowed). evaluate() returns the hull function, i.e.
/// the convex envelope of the data, as the maximum over supporting face
/// planes; it never overestimates the data.
class LowerHull {
public:
    LowerHull(std::span<const Point2> loop, std::span<const double> heights);

    double evaluate(Point2 p) const;
    int face_count() const { return static_cast<int>(faces_.size()); }

private:
    struct Face {
        int a, b, c;
        double gx, gy, g0; // plane z = gx x + gy y + g0
    };
    std::vector<Face> faces_;
    bool flat_ = false;
    double fx_ = 0.0, fy_ = 0.0, f0_ = 0.0; // plane when all points are coplanar
};

} // namespace ma2
