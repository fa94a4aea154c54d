#include "ma2scale/directions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ma2 {

DirectionSet build_direction_set(int D) {
    if (D < 2) throw std::invalid_argument("direction set needs at least 2 pairs");
    const double spacing = std::numbers::pi / 2.0 / (D - 1);
    DirectionSet set;
    set.theta = spacing;
    set.pairs.reserve(static_cast<std::size_t>(D));
    for (int k = 0; k < D; ++k) {
        const double a = k * spacing;
        DirectionPair p;
        p.angle = a;
        // exact axis vectors at the endpoints: the angle-pi/2 pair must share
        // its stencil offsets with the angle-0 pair bitwise
        if (k == 0)
            p.v = {1.0, 0.0};
        else if (k == D - 1)
            p.v = {0.0, 1.0};
        else
            p.v = {std::cos(a), std::sin(a)};
        p.v_perp = perp(p.v);
        set.pairs.push_back(p);
    }
    return set;
}

DirectionSet build_direction_set_from_theta(double theta) {
    if (!(theta > 0.0) || theta > std::numbers::pi / 2.0)
        throw std::invalid_argument("theta must lie in (0, pi/2]");
    const int D = static_cast<int>(std::ceil(std::numbers::pi / 2.0 / theta)) + 1;
    return build_direction_set(D);
}

int nearest_pair(const DirectionSet& set, Point2 v) {
    // reduce to [0, pi/2): pairs are invariant under negation and rotation by pi/2
    double a = std::atan2(v.y, v.x);
    const double quarter = std::numbers::pi / 2.0;
    a = std::fmod(a, quarter);
    if (a < 0.0) a += quarter;
    int best = 0;
    double best_gap = 1e300;
    for (int k = 0; k < set.pair_count(); ++k) {
        double gap = std::abs(set.pairs[static_cast<std::size_t>(k)].angle - a);
        gap = std::min(gap, quarter - gap); // angular distance modulo pi/2
        if (gap < best_gap - 1e-15) {
            best_gap = gap;
            best = k;
        }
    }
    return best;
}

} // namespace ma2
