#include "ma2scale/study.hpp"

#include "ma2scale/expr.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ma2 {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "problem.benchmark", "problem.f", "problem.g", "problem.exact",
        "mesh.n",
        "directions.D", "directions.theta",
        "delta.value", "delta.alpha",
        "solver.type", "solver.rtol", "solver.max_iter", "solver.max_backtracks",
        "solver.node_tol", "solver.max_sweeps",
        "init.type",
        "signs.eps",
        "seed",
    };
    return keys;
}

int benchmark_level_of(const Benchmark& bench, int n) {
    int level = 0;
    for (int m = bench.base_n; m <= n; m *= 2, ++level)
        if (m == n && level < bench.max_levels()) return level;
    return -1;
}

} // namespace

SolveSetup setup_from_config(const Config& config, std::vector<std::string>* warnings) {
    if (warnings) *warnings = config.unknown_keys(known_keys());

    SolveSetup setup;
    setup.mesh_n = config.get_int("mesh.n", 32);
    if (setup.mesh_n < 2) throw ConfigError("mesh.n", "must be >= 2");
    const double lattice_h = 1.0 / setup.mesh_n;

    std::optional<Benchmark> bench;
    if (config.has("problem.benchmark")) {
        for (const char* key : {"problem.f", "problem.g", "problem.exact"})
            if (config.has(key))
                throw ConfigError(key, "mutually exclusive with problem.benchmark");
        try {
            bench = builtin(config.get_string("problem.benchmark"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("problem.benchmark", e.what());
        }
        setup.benchmark = bench->name;
        setup.problem = bench->problem;
    } else {
        try {
            setup.problem.f = parse_expression(config.get_string("problem.f"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("problem.f", e.what());
        }
        try {
            setup.problem.g = parse_expression(config.get_string("problem.g"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("problem.g", e.what());
        }
        if (config.has("problem.exact")) {
            try {
                setup.problem.exact = parse_expression(config.get_string("problem.exact"));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("problem.exact", e.what());
            }
        }
    }

    if (config.has("directions.D") && config.has("directions.theta"))
        throw ConfigError("directions.theta", "mutually exclusive with directions.D");
    if (config.has("directions.D")) {
        setup.directions_D = config.get_int("directions.D");
        if (setup.directions_D < 2) throw ConfigError("directions.D", "must be >= 2");
    } else if (config.has("directions.theta")) {
        const double theta = config.get_double("directions.theta");
        try {
            setup.directions_D = build_direction_set_from_theta(theta).pair_count();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("directions.theta", e.what());
        }
    } else if (bench) {
        const int level = benchmark_level_of(*bench, setup.mesh_n);
        if (level < 0)
            throw ConfigError("directions.D",
                              "required: mesh.n does not match a benchmark level (32, 64, 128, 256)");
        setup.directions_D = bench->direction_count(level);
    } else {
        throw ConfigError("directions.D", "required (or directions.theta)");
    }

    if (config.has("delta.value") && config.has("delta.alpha"))
        throw ConfigError("delta.alpha", "mutually exclusive with delta.value");
    if (config.has("delta.value")) {
        setup.delta = config.get_double("delta.value");
    } else if (config.has("delta.alpha")) {
        setup.delta = std::pow(lattice_h, config.get_double("delta.alpha"));
    } else if (bench) {
        const int level = benchmark_level_of(*bench, setup.mesh_n);
        if (level < 0)
            throw ConfigError("delta.value",
                              "required: mesh.n does not match a benchmark level (32, 64, 128, 256)");
        setup.delta = bench->delta(level);
    } else {
        throw ConfigError("delta.value", "required (or delta.alpha)");
    }
    if (!(setup.delta > 0.0)) throw ConfigError("delta.value", "must be positive");

    const std::string solver = config.get_string("solver.type", "newton");
    if (solver == "newton")
        setup.solver = SolverKind::Newton;
    else if (solver == "perron")
        setup.solver = SolverKind::Perron;
    else
        throw ConfigError("solver.type", "expected newton or perron");

    setup.newton.rtol = config.get_double("solver.rtol", 1e-8);
    setup.newton.max_iter = config.get_int("solver.max_iter", 100);
    setup.newton.max_backtracks = config.get_int("solver.max_backtracks", 30);
    setup.perron.node_tol = config.get_double("solver.node_tol", -1.0);
    setup.perron.max_sweeps = config.get_int("solver.max_sweeps", 100000);

    const std::string init =
        config.get_string("init.type", setup.solver == SolverKind::Perron ? "hull" : "poisson");
    if (init == "poisson")
        setup.init = InitKind::Poisson;
    else if (init == "prolong")
        setup.init = InitKind::Prolong;
    else if (init == "hull")
        setup.init = InitKind::Hull;
    else
        throw ConfigError("init.type", "expected poisson, prolong or hull");
    if (setup.solver == SolverKind::Perron && setup.init != InitKind::Hull)
        throw ConfigError("init.type", "perron requires a verified subsolution: use init.type = hull");
    if (setup.init == InitKind::Prolong && setup.mesh_n % 2 != 0)
        throw ConfigError("init.type", "prolong needs an even mesh.n (coarse solve on n/2)");

    setup.sign_eps = config.get_double("signs.eps", 1e-6);
    setup.seed = config.get_int("seed", 0);
    return setup;
}

SolveOutcome run_solve(const SolveSetup& setup) {
    SolveOutcome outcome;
    outcome.benchmark = setup.benchmark;
    outcome.solver = setup.solver;
    outcome.sign_eps = setup.sign_eps;
    outcome.seed = setup.seed;
    outcome.delta = setup.delta;

    outcome.mesh = std::make_unique<TriangleMesh>(TriangleMesh::unit_square(setup.mesh_n));
    outcome.directions = std::make_unique<DirectionSet>(build_direction_set(setup.directions_D));
    const TriangleMesh& mesh = *outcome.mesh;
    TwoScaleParams params{mesh.mesh_size(), setup.delta, outcome.directions.get()};

    const double t0 = now_seconds();
    NodalField init;
    switch (setup.init) {
    case InitKind::Poisson:
        init = poisson_initial_guess(mesh, setup.problem);
        break;
    case InitKind::Hull:
        init = hull_subsolution(mesh, setup.problem, params);
        break;
    case InitKind::Prolong: {
        SolveSetup coarse = setup;
        coarse.mesh_n = setup.mesh_n / 2;
        coarse.init = InitKind::Poisson;
        coarse.delta = setup.delta; // same coarse scale; only the mesh changes
        SolveOutcome coarse_outcome = run_solve(coarse);
        // P1 evaluation on the coarse mesh reproduces the prolongation values
        // at every fine node (vertices and edge midpoints alike)
        init = NodalField(mesh);
        for (int i = 0; i < mesh.vertex_count(); ++i)
            init[i] = evaluate(coarse_outcome.field, coarse_outcome.mesh->locate(mesh.vertex(i)));
        for (int b : mesh.boundary_nodes()) init[b] = setup.problem.g(mesh.vertex(b));
        break;
    }
    }

    if (setup.solver == SolverKind::Newton) {
        try {
            NewtonResult result = newton_solve(setup.problem, mesh, params, std::move(init), setup.newton);
            outcome.field = std::move(result.field);
            outcome.newton_report = std::move(result.report);
            outcome.converged = true;
        } catch (const NewtonFailure& e) {
            outcome.field = e.partial_field();
            outcome.newton_report = e.report();
            outcome.converged = false;
            outcome.failure = e.what();
        }
    } else {
        try {
            PerronResult result = perron_solve(setup.problem, mesh, params, std::move(init), setup.perron);
            outcome.field = std::move(result.field);
            outcome.perron_report = std::move(result.report);
            outcome.converged = true;
        } catch (const PerronFailure& e) {
            outcome.field = e.partial_field();
            outcome.perron_report = e.report();
            outcome.converged = false;
            outcome.failure = e.what();
        }
    }
    outcome.runtime_seconds = now_seconds() - t0;

    outcome.stencils = build_stencils(mesh, params);
    outcome.eval = apply_operator(outcome.field, outcome.stencils);
    if (setup.problem.exact)
        outcome.linf_error = linf_node_error(outcome.field, *setup.problem.exact);
    return outcome;
}

StudyResult run_study(const Benchmark& bench, int levels, SolverKind solver,
                      const NewtonOptions& newton_options, const PerronOptions& perron_options,
                      const std::function<void(const LevelOutcome&)>& observer) {
    if (levels < 1 || levels > bench.max_levels())
        throw std::invalid_argument("study levels must lie in [1, " +
                                    std::to_string(bench.max_levels()) + "]");
    StudyResult result;
    result.benchmark = bench.name;

    auto mesh = std::make_unique<TriangleMesh>(TriangleMesh::unit_square(bench.base_n));
    NodalField prev_solution;

    for (int level = 0; level < levels; ++level) {
        if (level > 0) {
            auto [fine, prolong] = refine_uniform(*mesh);
            mesh = std::make_unique<TriangleMesh>(std::move(fine));
            if (prev_solution.mesh != nullptr) {
                std::vector<double> fine_vals = prolong.apply(prev_solution.values);
                prev_solution = NodalField(*mesh);
                prev_solution.values = std::move(fine_vals);
            }
        }
        const DirectionSet dirs = build_direction_set(bench.direction_count(level));
        const TwoScaleParams params{mesh->mesh_size(), bench.delta(level), &dirs};

        StudyRow row;
        row.h = bench.lattice_h(level);
        row.N = mesh->vertex_count();
        row.P = dirs.point_count();

        const double t0 = now_seconds();
        NodalField field;
        NewtonReport report;
        bool converged = false;
        if (solver == SolverKind::Perron) {
            try {
                NodalField sub = hull_subsolution(*mesh, bench.problem, params);
                PerronResult res = perron_solve(bench.problem, *mesh, params, std::move(sub), perron_options);
                field = std::move(res.field);
                row.newton_steps = res.report.sweeps;
                converged = res.report.converged;
            } catch (const PerronFailure& e) {
                field = e.partial_field();
                row.newton_steps = e.report().sweeps;
            }
        } else {
            NodalField init;
            if (level == 0 || bench.init_policy == InitPolicy::PoissonEachLevel ||
                prev_solution.mesh == nullptr) {
                init = poisson_initial_guess(*mesh, bench.problem);
            } else {
                init = prev_solution;
                for (int b : mesh->boundary_nodes()) init[b] = bench.problem.g(mesh->vertex(b));
            }
            try {
                NewtonResult res = newton_solve(bench.problem, *mesh, params, std::move(init), newton_options);
                field = std::move(res.field);
                report = std::move(res.report);
                converged = true;
            } catch (const NewtonFailure& e) {
                field = e.partial_field();
                report = e.report();
            }
            row.newton_steps = report.iterations;
        }
        row.runtime_seconds = now_seconds() - t0;
        row.converged = converged;
        row.linf_error = exact_error(field, bench);
        result.rows.push_back(row);

        if (observer)
            observer(LevelOutcome{level, *mesh, dirs, params.delta, field, report, converged});
        prev_solution = std::move(field);
    }

    // least-squares slope of log error vs log h over converged rows
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& row : result.rows) {
        if (!row.converged || !(row.linf_error > 0.0)) continue;
        const double lx = std::log(row.h), ly = std::log(row.linf_error);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++count;
    }
    result.rate_slope = count >= 2 ? (count * sxy - sx * sy) / (count * sxx - sx * sx) : 0.0;
    return result;
}

} // namespace ma2
