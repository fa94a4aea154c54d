#include "ma2scale/study.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNoConvergence = 2;

int run_solve_command(const std::string& config_path, const std::string& out_dir,
                      const std::string& solver_override, long long seed_override) {
    ma2::Config config;
    try {
        config = ma2::Config::parse_file(config_path);
    } catch (const ma2::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::vector<std::string> warnings;
    ma2::SolveSetup setup;
    try {
        setup = ma2::setup_from_config(config, &warnings);
    } catch (const ma2::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ma2::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    for (const auto& w : warnings)
        std::cerr << "warning: unknown config key '" << w << "' ignored\n";
    if (!solver_override.empty())
        setup.solver = solver_override == "perron" ? ma2::SolverKind::Perron : ma2::SolverKind::Newton;
    if (setup.solver == ma2::SolverKind::Perron && setup.init != ma2::InitKind::Hull)
        setup.init = ma2::InitKind::Hull;
    if (seed_override >= 0) setup.seed = seed_override;

    ma2::SolveOutcome outcome;
    try {
        outcome = ma2::run_solve(setup);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    }
    try {
        ma2::write_solve_outputs(outcome, setup.problem, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (outcome.solver == ma2::SolverKind::Newton) {
        std::printf("solve: N=%d iterations=%d residual=%.3e", outcome.mesh->vertex_count(),
                    outcome.newton_report.iterations, outcome.newton_report.final_residual);
    } else {
        std::printf("solve: N=%d sweeps=%d last_update=%.3e", outcome.mesh->vertex_count(),
                    outcome.perron_report.sweeps, outcome.perron_report.last_update);
    }
    if (outcome.linf_error) std::printf(" linf_error=%.6e", *outcome.linf_error);
    std::printf(" converged=%s\n", outcome.converged ? "yes" : "no");
    if (!outcome.converged) {
        std::cerr << "error: " << outcome.failure << "\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

int run_study_command(const std::string& benchmark, int levels, const std::string& out_dir,
                      const std::string& solver_name) {
    ma2::Benchmark bench;
    try {
        bench = ma2::builtin(benchmark);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const ma2::SolverKind solver =
        solver_name == "perron" ? ma2::SolverKind::Perron : ma2::SolverKind::Newton;

    ma2::StudyResult result;
    try {
        result = ma2::run_study(bench, levels, solver);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    }

    std::filesystem::create_directories(out_dir);
    ma2::write_table_csv(result, std::filesystem::path(out_dir) / "table.csv");
    ma2::write_study_json(result, std::filesystem::path(out_dir) / "study.json");

    std::printf("# benchmark=%s levels=%d\n", result.benchmark.c_str(), levels);
    std::printf("%-12s %-8s %-4s %-14s %-7s %-9s\n", "h", "N", "P", "linf_error", "steps", "time[s]");
    bool all_converged = true;
    for (const auto& row : result.rows) {
        std::printf("%-12.6g %-8d %-4d %-14.6e %-7d %-9.2f%s\n", row.h, row.N, row.P,
                    row.linf_error, row.newton_steps, row.runtime_seconds,
                    row.converged ? "" : "  [not converged]");
        all_converged = all_converged && row.converged;
    }
    std::printf("rate: least-squares slope of log(error) vs log(h) = %.3f\n", result.rate_slope);
    return all_converged ? kExitOk : kExitNoConvergence;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-scale solver for the Dirichlet Monge-Ampere equation det D2u = f"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", solver_override, benchmark;
    long long seed = -1;
    int levels = 3;

    CLI::App* solve = app.add_subcommand("solve", "run a single solve from a config file");
    solve->add_option("--config", config_path, "flat key = value config file")->required();
    solve->add_option("--out", out_dir, "output directory (field.csv, operator.csv, signs.csv, report.json)");
    solve->add_option("--solver", solver_override, "override solver.type")
        ->check(CLI::IsMember({"newton", "perron"}));
    solve->add_option("--seed", seed, "seed recorded in report.json (used by property-test utilities)");

    std::string study_out = ".", study_solver = "newton";
    CLI::App* study = app.add_subcommand("study", "run a convergence study of a builtin benchmark");
    study->add_option("--benchmark", benchmark, "smooth | discontinuous | unbounded")->required();
    study->add_option("--levels", levels, "number of levels starting at h = 2^-5")->required();
    study->add_option("--out", study_out, "output directory (table.csv, study.json)");
    study->add_option("--solver", study_solver, "newton | perron")
        ->check(CLI::IsMember({"newton", "perron"}));
    study->add_option("--seed", seed, "accepted for reproducibility tooling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (solve->parsed()) return run_solve_command(config_path, out_dir, solver_override, seed);
        return run_study_command(benchmark, levels, study_out, study_solver);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
