#include "ma2scale/expr.hpp"
#include "ma2scale/problems.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ma2;

TEST_SUITE("problems") {

TEST_CASE("builtin registry values") {
    const auto smooth = builtin("smooth");
    CHECK(smooth.problem.f({0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(smooth.delta_alpha == 0.5);
    CHECK(smooth.P_per_level == std::vector<int>{16, 24, 36, 52});
    CHECK(smooth.direction_count(0) == 5);
    CHECK(smooth.direction_count(2) == 10);
    CHECK(smooth.lattice_h(0) == doctest::Approx(1.0 / 32.0));
    CHECK(smooth.delta(0) == doctest::Approx(smooth.delta_c * std::sqrt(1.0 / 32.0)));

    const auto disc = builtin("discontinuous");
    CHECK(disc.problem.f({0.5, 0.5}) == 0.0); // limit convention at x0
    CHECK(disc.problem.f({0.6, 0.5}) == 0.0); // inside the f = 0 ball
    CHECK(disc.problem.f({0.9, 0.5}) == doctest::Approx(0.5));
    CHECK(disc.delta_alpha == doctest::Approx(0.8));
    CHECK(disc.P_per_level == std::vector<int>{20, 28, 36, 48});

    const auto unb = builtin("unbounded");
    CHECK(unb.problem.g({1.0, 1.0}) == 0.0); // boundary node takes g, not f
    CHECK(unb.init_policy == InitPolicy::PoissonEachLevel);
    CHECK(unb.P_per_level == std::vector<int>{16, 24, 36, 52});

    CHECK_THROWS_AS(builtin("nope"), std::invalid_argument);
}

TEST_CASE("f is nonnegative at interior nodes on benchmark meshes") {
    const auto mesh = TriangleMesh::unit_square(32);
    for (const char* name : {"smooth", "discontinuous", "unbounded"}) {
        const auto bench = builtin(name);
        for (int i : mesh.interior_nodes()) {
            const double v = bench.problem.f(mesh.vertex(i));
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("exact solutions are discretely convex") {
    const auto mesh = TriangleMesh::unit_square(32);
    for (const char* name : {"smooth", "discontinuous", "unbounded"}) {
        const auto bench = builtin(name);
        const auto dirs = build_direction_set(bench.direction_count(0));
        const TwoScaleParams params{mesh.mesh_size(), bench.delta(0), &dirs};
        const auto table = build_stencils(mesh, params);
        const auto field = interpolate(mesh, *bench.problem.exact);
        CHECK(is_discretely_convex(field, table).convex);
    }
}

TEST_CASE("exact_error") {
    const auto bench = builtin("smooth");
    const auto mesh = TriangleMesh::unit_square(8);
    const auto field = interpolate(mesh, *bench.problem.exact);
    CHECK(exact_error(field, bench) == 0.0);

    auto shifted = field;
    for (double& v : shifted.values) v += 1e-3;
    CHECK(exact_error(shifted, bench) == doctest::Approx(1e-3).epsilon(1e-10));
}

TEST_CASE("expression grammar reproduces the builtin formulas") {
    const auto smooth_f = parse_expression("(1 + norm2(x,y)^2) * exp(norm2(x,y)^2)");
    const auto smooth_u = parse_expression("exp(norm2(x,y)^2 / 2)");
    const auto disc_u = parse_expression("0.5 * max(norm2(x-0.5, y-0.5) - 0.2, 0)^2");
    const auto unb_u = parse_expression("-sqrt(2 - norm2(x,y)^2)");

    const auto smooth = builtin("smooth");
    const auto disc = builtin("discontinuous");
    const auto unb = builtin("unbounded");

    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Point2 p{uni(rng), uni(rng)};
        CHECK(smooth_f(p) == doctest::Approx(smooth.problem.f(p)).epsilon(1e-13));
        CHECK(smooth_u(p) == doctest::Approx((*smooth.problem.exact)(p)).epsilon(1e-13));
        CHECK(disc_u(p) == doctest::Approx((*disc.problem.exact)(p)).epsilon(1e-13));
        CHECK(unb_u(p) == doctest::Approx((*unb.problem.exact)(p)).epsilon(1e-13));
    }
}

TEST_CASE("expression grammar corner cases") {
    CHECK(parse_expression("2 + 3 * 4 ^ 0.5")({0, 0}) == doctest::Approx(8.0));
    CHECK(parse_expression("-x^2")({3.0, 0.0}) == doctest::Approx(-9.0));
    CHECK(parse_expression("2^-1")({0, 0}) == doctest::Approx(0.5));
    CHECK(parse_expression("2^3^2")({0, 0}) == doctest::Approx(512.0)); // right assoc
    CHECK(parse_expression("abs(-3) + max(1, 2)")({0, 0}) == doctest::Approx(5.0));
    CHECK(parse_expression("pi")({0, 0}) == doctest::Approx(3.14159265358979));

    CHECK_THROWS_AS(parse_expression("z + 1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("(x + 1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("max(x)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("x + "), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("sin(x)"), std::invalid_argument);
}

} // TEST_SUITE
