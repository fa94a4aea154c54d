#pragma once

#include "ma2scale/geometry.hpp"

#include <vector>

namespace ma2 {

/// One orthonormal pair (v, v rotated by +pi/2).
struct DirectionPair {
    Point2 v;
    Point2 v_perp;
    double angle = 0.0; // angle of v in [0, pi/2]
};

/// Finite family of orthonormal direction pairs discretizing the unit circle.
/// Pair angles are uniformly spaced over the quarter circle [0, pi/2]; the
/// remaining quadrants are covered by the +/- symmetry of centered second
/// differences. The stencil uses P = 4(D-1) distinct offsets because the
/// angle-pi/2 pair shares its offsets with the angle-0 pair.
struct DirectionSet {
    double theta = 0.0; // consecutive angular spacing, also the covering radius
    std::vector<DirectionPair> pairs;

    int pair_count() const { return static_cast<int>(pairs.size()); }
    int point_count() const { return 4 * (pair_count() - 1); } // P
};

/// D pairs at angles k*pi/(2(D-1)), k = 0..D-1. Throws for D < 2.
DirectionSet build_direction_set(int D);

/// Chooses D = ceil((pi/2)/theta) + 1 so the achieved spacing is <= theta.
DirectionSet build_direction_set_from_theta(double theta);

/// Index of the pair minimizing angular distance to v modulo the pi/2 symmetry.
int nearest_pair(const DirectionSet& set, Point2 v);

} // namespace ma2
