#include "ma2scale/errors.hpp"
#include "ma2scale/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

using namespace ma2;

namespace {

/// Brute-force location oracle: scan every triangle, solve the 2x2 affine
/// system exactly, pick the lowest containing id.
BarycentricHit locate_brute_force(const TriangleMesh& mesh, Point2 p, double tol = 1e-10) {
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangle(t);
        const Point2 a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), c = mesh.vertex(tri[2]);
        const double det = signed_area2(a, b, c);
        const double w1 = signed_area2(a, p, c) / det;
        const double w2 = signed_area2(a, b, p) / det;
        const double w0 = 1.0 - w1 - w2;
        if (w0 >= -tol && w1 >= -tol && w2 >= -tol) return {t, {w0, w1, w2}};
    }
    return {-1, {}};
}

/// Geometry fingerprint independent of vertex/triangle ordering.
std::multiset<std::string> triangle_signature(const TriangleMesh& mesh) {
    std::multiset<std::string> sig;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        std::array<std::pair<double, double>, 3> pts;
        for (int k = 0; k < 3; ++k) {
            const Point2 p = mesh.vertex(mesh.triangle(t)[static_cast<std::size_t>(k)]);
            pts[static_cast<std::size_t>(k)] = {p.x, p.y};
        }
        std::sort(pts.begin(), pts.end());
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.12f,%.12f;%.12f,%.12f;%.12f,%.12f", pts[0].first,
                      pts[0].second, pts[1].first, pts[1].second, pts[2].first, pts[2].second);
        sig.insert(buf);
    }
    return sig;
}

} // namespace

TEST_SUITE("mesh") {

TEST_CASE("unit square counts") {
    const auto m2 = TriangleMesh::unit_square(2);
    CHECK(m2.vertex_count() == 9);
    CHECK(m2.triangle_count() == 8);
    REQUIRE(m2.interior_nodes().size() == 1);
    const Point2 c = m2.vertex(m2.interior_nodes()[0]);
    CHECK(c.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.y == doctest::Approx(0.5).epsilon(1e-15));

    const auto m32 = TriangleMesh::unit_square(32);
    CHECK(m32.vertex_count() == 1089);

    const auto m4 = TriangleMesh::unit_square(4);
    CHECK(m4.boundary_nodes().size() == 16);
    CHECK(m4.interior_nodes().size() == 9);

    CHECK(m4.mesh_size() == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
    CHECK(m4.domain_area() == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(TriangleMesh::unit_square(1), std::invalid_argument);
}

TEST_CASE("refine matches the finer structured mesh up to ordering") {
    const auto coarse = TriangleMesh::unit_square(2);
    const auto [fine, prolong] = refine_uniform(coarse);
    const auto direct = TriangleMesh::unit_square(4);
    CHECK(fine.vertex_count() == direct.vertex_count());
    CHECK(fine.triangle_count() == direct.triangle_count());
    CHECK(triangle_signature(fine) == triangle_signature(direct));
    CHECK(fine.mesh_size() == doctest::Approx(coarse.mesh_size() / 2.0).epsilon(1e-14));
    CHECK(fine.interior_nodes().size() == direct.interior_nodes().size());
}

TEST_CASE("prolongation reproduces P1 functions") {
    const auto coarse = TriangleMesh::unit_square(3);
    const auto [fine, prolong] = refine_uniform(coarse);

    std::vector<double> ones(static_cast<std::size_t>(coarse.vertex_count()), 1.0);
    for (double v : prolong.apply(ones)) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

    std::vector<double> linear(static_cast<std::size_t>(coarse.vertex_count()));
    for (int i = 0; i < coarse.vertex_count(); ++i)
        linear[static_cast<std::size_t>(i)] = coarse.vertex(i).x + coarse.vertex(i).y;
    const auto fine_vals = prolong.apply(linear);
    for (int i = 0; i < fine.vertex_count(); ++i)
        CHECK(fine_vals[static_cast<std::size_t>(i)] ==
              doctest::Approx(fine.vertex(i).x + fine.vertex(i).y).epsilon(1e-13));
}

TEST_CASE("locate: vertices, centroids, derived point") {
    const auto mesh = TriangleMesh::unit_square(2);

    for (int i = 0; i < mesh.vertex_count(); ++i) {
        const auto hit = mesh.locate(mesh.vertex(i));
        int ones = 0, zeros = 0;
        for (double w : hit.weights) {
            if (std::abs(w - 1.0) < 1e-12) ++ones;
            if (std::abs(w) < 1e-12) ++zeros;
        }
        CHECK(ones == 1);
        CHECK(zeros == 2);
    }

    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangle(t);
        const Point2 centroid = (1.0 / 3.0) * (mesh.vertex(tri[0]) + mesh.vertex(tri[1]) + mesh.vertex(tri[2]));
        const auto hit = mesh.locate(centroid);
        CHECK(hit.triangle == t);
        for (double w : hit.weights) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }

    const Point2 p{0.3, 0.1};
    const auto hit = mesh.locate(p);
    const auto oracle = locate_brute_force(mesh, p);
    CHECK(hit.triangle == oracle.triangle);
    for (int k = 0; k < 3; ++k)
        CHECK(hit.weights[static_cast<std::size_t>(k)] ==
              doctest::Approx(oracle.weights[static_cast<std::size_t>(k)]).epsilon(1e-12));

    CHECK_THROWS_AS(mesh.locate({1.5, 0.5}), OutOfDomainError);
    CHECK_THROWS_AS(mesh.locate({0.5, -0.2}), OutOfDomainError);
}

TEST_CASE("locate: random points reconstruct and match brute force") {
    const auto mesh = TriangleMesh::unit_square(7);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const Point2 p{uni(rng), uni(rng)};
        const auto hit = mesh.locate(p);
        const double wsum = hit.weights[0] + hit.weights[1] + hit.weights[2];
        CHECK(std::abs(wsum - 1.0) <= 1e-12);
        const auto& tri = mesh.triangle(hit.triangle);
        Point2 rec{0.0, 0.0};
        for (int k = 0; k < 3; ++k)
            rec = rec + hit.weights[static_cast<std::size_t>(k)] * mesh.vertex(tri[static_cast<std::size_t>(k)]);
        CHECK(distance(rec, p) <= 1e-12);
        CHECK(hit.triangle == locate_brute_force(mesh, p).triangle);
    }
}

TEST_CASE("boundary distance") {
    const auto mesh = TriangleMesh::unit_square(4);
    CHECK(mesh.boundary_distance({0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mesh.boundary_distance({0.1, 0.5}) == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(mesh.boundary_distance({0.25, 0.125}) == doctest::Approx(0.125).epsilon(1e-13));

    // zero exactly on the loop, positive strictly inside
    CHECK(mesh.boundary_distance({0.25, 0.0}) == doctest::Approx(0.0));
    CHECK(mesh.boundary_distance({1.0, 0.3}) == doctest::Approx(0.0));
    for (int i : mesh.interior_nodes()) CHECK(mesh.boundary_distance(mesh.vertex(i)) > 0.0);
    for (int b : mesh.boundary_nodes()) CHECK(mesh.boundary_distance(mesh.vertex(b)) <= 1e-15);
}

TEST_CASE("refinement preserves classification and convexity") {
    auto mesh = TriangleMesh::unit_square(3);
    const auto [fine, prolong] = refine_uniform(mesh);
    // boundary midpoints stay on the boundary, interior stays interior
    for (int i = 0; i < fine.vertex_count(); ++i) {
        const bool on_edge = fine.boundary_distance(fine.vertex(i)) <= 1e-14;
        CHECK((fine.node_class(i) == NodeClass::Boundary) == on_edge);
    }
    CHECK(static_cast<int>(fine.boundary_loop().size()) == 2 * static_cast<int>(mesh.boundary_loop().size()));
}

TEST_CASE("invalid meshes are rejected") {
    // clockwise triangle
    CHECK_THROWS_AS(TriangleMesh::from_data({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}), MeshError);
    // non-conforming T-junction: edge shared by overlapping triangles
    CHECK_THROWS_AS(TriangleMesh::from_data({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}},
                                            {{0, 1, 2}, {1, 3, 2}, {0, 1, 4}}),
                    MeshError);
    // non-convex (L-shaped) domain
    CHECK_THROWS_AS(TriangleMesh::from_data(
                        {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}, {0, 2}},
                        {{0, 1, 2}, {0, 2, 5}, {2, 3, 4}, {2, 4, 5}}),
                    MeshError);
}

TEST_CASE("csv round trip") {
    const auto mesh = TriangleMesh::unit_square(3);
    const auto dir = std::filesystem::temp_directory_path() / "ma2scale_mesh_csv";
    std::filesystem::create_directories(dir);
    mesh.dump_csv(dir / "vertices.csv", dir / "triangles.csv");
    const auto loaded = TriangleMesh::load_csv(dir / "vertices.csv", dir / "triangles.csv");
    REQUIRE(loaded.vertex_count() == mesh.vertex_count());
    REQUIRE(loaded.triangle_count() == mesh.triangle_count());
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        CHECK(loaded.vertex(i).x == mesh.vertex(i).x);
        CHECK(loaded.vertex(i).y == mesh.vertex(i).y);
        CHECK(loaded.node_class(i) == mesh.node_class(i));
    }
    for (int t = 0; t < mesh.triangle_count(); ++t) CHECK(loaded.triangle(t) == mesh.triangle(t));
}

} // TEST_SUITE
