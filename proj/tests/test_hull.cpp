#include "ma2scale/hull.hpp"
#include "ma2scale/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace ma2;

namespace {

std::vector<Point2> square_loop(const TriangleMesh& mesh, std::vector<int>* ids = nullptr) {
    std::vector<Point2> pts;
    for (int i : mesh.boundary_loop()) {
        pts.push_back(mesh.vertex(i));
        if (ids) ids->push_back(i);
    }
    return pts;
}

/// Envelope oracle: minimum barycentric combination over all boundary-point
/// triples whose triangle contains p.
double envelope_oracle(const std::vector<Point2>& pts, const std::vector<double>& z, Point2 p) {
    const int n = static_cast<int>(pts.size());
    double best = 1e300;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const double det = signed_area2(pts[static_cast<std::size_t>(i)],
                                                pts[static_cast<std::size_t>(j)],
                                                pts[static_cast<std::size_t>(k)]);
                if (std::abs(det) < 1e-14) continue;
                const double w1 = signed_area2(pts[static_cast<std::size_t>(i)], p,
                                               pts[static_cast<std::size_t>(k)]) / det;
                const double w2 = signed_area2(pts[static_cast<std::size_t>(i)],
                                               pts[static_cast<std::size_t>(j)], p) / det;
                const double w0 = 1.0 - w1 - w2;
                if (w0 < -1e-12 || w1 < -1e-12 || w2 < -1e-12) continue;
                best = std::min(best, w0 * z[static_cast<std::size_t>(i)] +
                                          w1 * z[static_cast<std::size_t>(j)] +
                                          w2 * z[static_cast<std::size_t>(k)]);
            }
    return best;
}

} // namespace

TEST_SUITE("hull") {

TEST_CASE("affine data reproduces the plane") {
    const auto mesh = TriangleMesh::unit_square(4);
    const auto pts = square_loop(mesh);
    std::vector<double> z;
    for (const auto& p : pts) z.push_back(1.5 * p.x - 0.5 * p.y + 2.0);
    const LowerHull hull(pts, z);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Point2 p{uni(rng), uni(rng)};
        CHECK(hull.evaluate(p) == doctest::Approx(1.5 * p.x - 0.5 * p.y + 2.0).epsilon(1e-10));
    }
}

TEST_CASE("convex trace data is interpolated, concave data is underestimated") {
    const auto mesh = TriangleMesh::unit_square(6);
    const auto pts = square_loop(mesh);

    SUBCASE("trace of a convex function") {
        std::vector<double> z;
        for (const auto& p : pts) z.push_back(0.5 * (p.x * p.x + p.y * p.y));
        const LowerHull hull(pts, z);
        // never overestimates the data, and matches at every boundary node
        // (the trace is convex along each side)
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(hull.evaluate(pts[i]) <= z[i] + 1e-11);
            CHECK(hull.evaluate(pts[i]) >= z[i] - 1e-11);
        }
        // convexity along a diagonal sample
        double prev_slope = -1e300;
        for (int s = 0; s + 1 < 20; ++s) {
            const double t0 = s / 19.0, t1 = (s + 1) / 19.0;
            const double v0 = hull.evaluate({t0, t0});
            const double v1 = hull.evaluate({t1, t1});
            const double slope = (v1 - v0) / (t1 - t0);
            CHECK(slope >= prev_slope - 1e-9);
            prev_slope = slope;
        }
    }

    SUBCASE("concave-along-an-edge data drops below the data") {
        std::vector<double> z;
        for (const auto& p : pts) z.push_back(-std::pow(p.x - 0.5, 2.0));
        const LowerHull hull(pts, z);
        bool strictly_below = false;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(hull.evaluate(pts[i]) <= z[i] + 1e-11);
            if (hull.evaluate(pts[i]) < z[i] - 1e-9) strictly_below = true;
        }
        CHECK(strictly_below);
    }
}

TEST_CASE("matches the triple oracle on random data") {
    const auto mesh = TriangleMesh::unit_square(3);
    const auto pts = square_loop(mesh);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> z;
        for (std::size_t i = 0; i < pts.size(); ++i) z.push_back(uni(rng));
        const LowerHull hull(pts, z);
        std::uniform_real_distribution<double> coord(0.05, 0.95);
        for (int q = 0; q < 25; ++q) {
            const Point2 p{coord(rng), coord(rng)};
            const double expected = envelope_oracle(pts, z, p);
            CHECK(hull.evaluate(p) == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

} // TEST_SUITE
