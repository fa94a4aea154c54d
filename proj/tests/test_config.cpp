#include "ma2scale/config.hpp"
#include "ma2scale/errors.hpp"
#include "ma2scale/study.hpp"

#include <doctest.h>

using namespace ma2;

TEST_SUITE("config") {

TEST_CASE("parsing basics") {
    const auto cfg = Config::parse_string(
        "# comment line\n"
        "mesh.n = 16\n"
        "solver.rtol = 1e-9   # trailing comment\n"
        "problem.g = x + y\n"
        "\n");
    CHECK(cfg.get_int("mesh.n") == 16);
    CHECK(cfg.get_double("solver.rtol") == doctest::Approx(1e-9));
    CHECK(cfg.get_string("problem.g") == "x + y");
    CHECK(cfg.get_int("missing", 7) == 7);
    CHECK_THROWS_AS(cfg.get_string("missing"), ConfigError);
    CHECK_THROWS_AS(cfg.get_int("problem.g"), ConfigError);
    CHECK_THROWS_AS(Config::parse_string("just a line without equals\n"), Error);
}

TEST_CASE("unknown keys are reported") {
    const auto cfg = Config::parse_string("mesh.n = 4\nweird.key = 1\n");
    const auto unknown = cfg.unknown_keys({"mesh.n"});
    REQUIRE(unknown.size() == 1);
    CHECK(unknown[0] == "weird.key");
}

TEST_CASE("setup from config: benchmark defaults") {
    std::vector<std::string> warnings;
    const auto setup = setup_from_config(
        Config::parse_string("problem.benchmark = smooth\nmesh.n = 64\n"), &warnings);
    CHECK(warnings.empty());
    CHECK(setup.benchmark == "smooth");
    CHECK(setup.mesh_n == 64);
    CHECK(setup.directions_D == 7); // P = 24 at level 1
    CHECK(setup.solver == SolverKind::Newton);
    CHECK(setup.newton.rtol == doctest::Approx(1e-8));
}

TEST_CASE("setup from config: custom problem requires directions and delta") {
    CHECK_THROWS_AS(setup_from_config(Config::parse_string("problem.f = 0\nproblem.g = x\n")),
                    ConfigError);
    const auto setup = setup_from_config(Config::parse_string(
        "problem.f = 0\nproblem.g = x\ndirections.D = 4\ndelta.value = 0.25\nmesh.n = 8\n"));
    CHECK(setup.directions_D == 4);
    CHECK(setup.delta == doctest::Approx(0.25));
    CHECK(setup.problem.g({1.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("setup from config: conflicts and bad values") {
    CHECK_THROWS_AS(setup_from_config(Config::parse_string(
                        "problem.benchmark = smooth\nproblem.f = 0\nmesh.n = 32\n")),
                    ConfigError);
    CHECK_THROWS_AS(setup_from_config(Config::parse_string(
                        "problem.benchmark = smooth\nmesh.n = 32\n"
                        "directions.D = 5\ndirections.theta = 0.2\n")),
                    ConfigError);
    CHECK_THROWS_AS(setup_from_config(Config::parse_string(
                        "problem.benchmark = nope\nmesh.n = 32\n")),
                    ConfigError);
    CHECK_THROWS_AS(setup_from_config(Config::parse_string(
                        "problem.benchmark = smooth\nmesh.n = 32\nsolver.type = cg\n")),
                    ConfigError);
    CHECK_THROWS_AS(setup_from_config(Config::parse_string(
                        "problem.benchmark = smooth\nmesh.n = 32\ninit.type = magic\n")),
                    ConfigError);
}

TEST_CASE("setup from config: directions.theta path") {
    const auto setup = setup_from_config(Config::parse_string(
        "problem.benchmark = smooth\nmesh.n = 32\ndirections.theta = 0.4\n"));
    CHECK(setup.directions_D == 5); // ceil((pi/2)/0.4) + 1
}

} // TEST_SUITE
