#include "ma2scale/hull.hpp"

#include "ma2scale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace ma2 {

namespace {

struct Vec3 {
    double x, y, z;
};

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double dot3(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

} // namespace

LowerHull::LowerHull(std::span<const Point2> loop, std::span<const double> heights) {
    const int n = static_cast<int>(loop.size());
    if (n < 3 || heights.size() != loop.size())
        throw std::invalid_argument("lower hull needs a loop of >= 3 lifted points");

    std::vector<Vec3> pts(static_cast<std::size_t>(n));
    double coord_scale = 0.0, z_scale = 0.0;
    for (int i = 0; i < n; ++i) {
        pts[static_cast<std::size_t>(i)] = {loop[static_cast<std::size_t>(i)].x,
                                            loop[static_cast<std::size_t>(i)].y,
                                            heights[static_cast<std::size_t>(i)]};
        coord_scale = std::max({coord_scale, std::abs(loop[static_cast<std::size_t>(i)].x),
                                std::abs(loop[static_cast<std::size_t>(i)].y)});
        z_scale = std::max(z_scale, std::abs(heights[static_cast<std::size_t>(i)]));
    }
    const double area_tol = 1e-13 * std::max(coord_scale * coord_scale, 1e-30);
    const double lift_tol = 1e-12 * std::max({coord_scale, z_scale, 1.0});

    // coplanar shortcut: fit a plane through three spread-out points and test the rest
    {
        int i1 = -1, i2 = -1;
        for (int i = 1; i < n && i2 < 0; ++i) {
            const double d = distance(loop[static_cast<std::size_t>(i)], loop[0]);
            if (i1 < 0 && d > 1e-12) i1 = i;
            else if (i1 >= 0 &&
                     std::abs(cross(loop[static_cast<std::size_t>(i1)] - loop[0],
                                    loop[static_cast<std::size_t>(i)] - loop[0])) > area_tol)
                i2 = i;
        }
        if (i2 >= 0) {
            const Vec3 nrm = cross3(sub(pts[static_cast<std::size_t>(i1)], pts[0]),
                                    sub(pts[static_cast<std::size_t>(i2)], pts[0]));
            if (std::abs(nrm.z) > area_tol) {
                bool flat = true;
                for (int i = 0; i < n && flat; ++i)
                    flat = std::abs(dot3(nrm, sub(pts[static_cast<std::size_t>(i)], pts[0]))) <=
                           lift_tol * std::abs(nrm.z) * 8;
                if (flat) {
                    flat_ = true;
                    fx_ = -nrm.x / nrm.z;
                    fy_ = -nrm.y / nrm.z;
                    f0_ = pts[0].z - fx_ * pts[0].x - fy_ * pts[0].y;
                    return;
                }
            }
        }
    }

    // Seed edges: for each maximal collinear run of the loop (one polygon
    // side), the 2D lower hull of the lifted run gives genuine hull boundary
    // edges with the domain on their left.
    std::vector<std::pair<int, int>> queue;
    {
        // side breaks at strict turns of the loop
        std::vector<int> corners;
        for (int i = 0; i < n; ++i) {
            const Point2 prev = loop[static_cast<std::size_t>((i + n - 1) % n)];
            const Point2 cur = loop[static_cast<std::size_t>(i)];
            const Point2 next = loop[static_cast<std::size_t>((i + 1) % n)];
            if (std::abs(signed_area2(prev, cur, next)) > area_tol) corners.push_back(i);
        }
        if (corners.size() < 3) throw std::invalid_argument("lower hull: degenerate polygon loop");
        const int nc = static_cast<int>(corners.size());
        for (int c = 0; c < nc; ++c) {
            const int s = corners[static_cast<std::size_t>(c)];
            const int e = corners[static_cast<std::size_t>((c + 1) % nc)];
            // indices along this side, in loop order
            std::vector<int> side;
            for (int i = s;; i = (i + 1) % n) {
                side.push_back(i);
                if (i == e) break;
            }
            // 2D lower hull in (arclength, z); monotone chain
            std::vector<int> chain;
            const Point2 origin = loop[static_cast<std::size_t>(s)];
            auto t_of = [&](int idx) { return distance(loop[static_cast<std::size_t>(idx)], origin); };
            for (int idx : side) {
                while (chain.size() >= 2) {
                    const int p1 = chain[chain.size() - 2], p2 = chain[chain.size() - 1];
                    const double c2 = (t_of(p2) - t_of(p1)) * (heights[static_cast<std::size_t>(idx)] - heights[static_cast<std::size_t>(p1)]) -
                                      (heights[static_cast<std::size_t>(p2)] - heights[static_cast<std::size_t>(p1)]) * (t_of(idx) - t_of(p1));
                    if (c2 <= lift_tol) chain.pop_back(); // p2 on or above segment (p1, idx)
                    else break;
                }
                chain.push_back(idx);
            }
            for (std::size_t i = 0; i + 1 < chain.size(); ++i)
                queue.emplace_back(chain[i], chain[i + 1]);
        }
    }

    // Gift wrapping of the lower hull with orientation predicates only.
    std::set<std::pair<int, int>> done;
    std::size_t head = 0;
    while (head < queue.size()) {
        const auto [u, v] = queue[head++];
        if (done.count({u, v})) continue;
        const Vec3& U = pts[static_cast<std::size_t>(u)];
        const Vec3& V = pts[static_cast<std::size_t>(v)];
        int best = -1;
        Vec3 best_n{};
        for (int c = 0; c < n; ++c) {
            if (c == u || c == v) continue;
            // candidates strictly left of u->v in projection
            if (signed_area2({U.x, U.y}, {V.x, V.y}, {pts[static_cast<std::size_t>(c)].x, pts[static_cast<std::size_t>(c)].y}) <= area_tol)
                continue;
            if (best < 0) {
                best = c;
                best_n = cross3(sub(V, U), sub(pts[static_cast<std::size_t>(c)], U));
                continue;
            }
            // replace when c lies strictly below the plane (u, v, best)
            if (dot3(best_n, sub(pts[static_cast<std::size_t>(c)], U)) < -lift_tol * 1e-3) {
                best = c;
                best_n = cross3(sub(V, U), sub(pts[static_cast<std::size_t>(c)], U));
            }
        }
        if (best < 0) continue; // silhouette edge seen from outside
        if (best_n.z <= 0.0) continue; // numerically vertical sliver, no usable plane
        Face f;
        f.a = u; f.b = v; f.c = best;
        f.gx = -best_n.x / best_n.z;
        f.gy = -best_n.y / best_n.z;
        f.g0 = U.z - f.gx * U.x - f.gy * U.y;
        faces_.push_back(f);
        done.insert({u, v});
        done.insert({v, best});
        done.insert({best, u});
        if (!done.count({best, v})) queue.emplace_back(best, v);
        if (!done.count({u, best})) queue.emplace_back(u, best);
    }
    if (faces_.empty()) throw Error("lower hull construction produced no faces");
}

double LowerHull::evaluate(Point2 p) const {
    if (flat_) return fx_ * p.x + fy_ * p.y + f0_;
    double best = -std::numeric_limits<double>::max();
    for (const Face& f : faces_)
        best = std::max(best, f.gx * p.x + f.gy * p.y + f.g0);
    return best;
}

} // namespace ma2
