#pragma once

#include "ma2scale/fe.hpp"
#include "ma2scale/mesh.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace test_support {

using ma2::Point2;

/// Random convex scalar functions; their interpolants are discretely convex.
class ConvexFieldGenerator {
public:
    explicit ConvexFieldGenerator(std::uint64_t seed) : rng_(seed) {}

    ma2::ScalarFunc next() {
        switch (rng_() % 4) {
        case 0: return random_quadratic();
        case 1: return max_of_affines();
        case 2: return radial_cone();
        default: {
            auto a = random_quadratic();
            auto b = max_of_affines();
            return [a, b](Point2 p) { return a(p) + b(p); };
        }
        }
    }

    /// Strictly convex with a smooth perturbation; useful where kinks of
    /// max-type generators would sit exactly on the H+/H- switching points.
    ma2::ScalarFunc next_strictly_convex() {
        const double a = uniform(0.5, 3.0);
        const double cx = uniform(-0.3, 1.3), cy = uniform(-0.3, 1.3);
        const double amp = uniform(0.0, 0.2) * a; // keeps the Hessian >= a/2
        const double fx = uniform(0.5, 2.0), fy = uniform(0.5, 2.0);
        return [=](Point2 p) {
            const double dx = p.x - cx, dy = p.y - cy;
            return 0.5 * a * (dx * dx + dy * dy) +
                   amp / (4.0 * (fx * fx + fy * fy)) * std::sin(fx * p.x + fy * p.y);
        };
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    }

    std::mt19937_64& rng() { return rng_; }

private:
    ma2::ScalarFunc random_quadratic() {
        // x^T R^T D R x / 2 with D >= 0: convex by construction
        const double angle = uniform(0.0, 3.14159);
        const double d1 = uniform(0.0, 3.0), d2 = uniform(0.0, 3.0);
        const double cx = uniform(0.0, 1.0), cy = uniform(0.0, 1.0);
        const double gx = uniform(-1.0, 1.0), gy = uniform(-1.0, 1.0);
        const double c = std::cos(angle), s = std::sin(angle);
        return [=](Point2 p) {
            const double ux = c * (p.x - cx) + s * (p.y - cy);
            const double uy = -s * (p.x - cx) + c * (p.y - cy);
            return 0.5 * (d1 * ux * ux + d2 * uy * uy) + gx * p.x + gy * p.y;
        };
    }

    ma2::ScalarFunc max_of_affines() {
        const int k = 2 + static_cast<int>(rng_() % 4);
        std::vector<std::array<double, 3>> planes;
        for (int i = 0; i < k; ++i)
            planes.push_back({uniform(-2.0, 2.0), uniform(-2.0, 2.0), uniform(-0.5, 0.5)});
        return [planes](Point2 p) {
            double m = -1e300;
            for (const auto& pl : planes) m = std::max(m, pl[0] * p.x + pl[1] * p.y + pl[2]);
            return m;
        };
    }

    ma2::ScalarFunc radial_cone() {
        const double cx = uniform(0.0, 1.0), cy = uniform(0.0, 1.0);
        const double s = uniform(0.2, 2.0);
        return [=](Point2 p) { return s * std::hypot(p.x - cx, p.y - cy); };
    }

    std::mt19937_64 rng_;
};

} // namespace test_support
