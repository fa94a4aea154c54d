#pragma once

#include "ma2scale/config.hpp"
#include "ma2scale/directions.hpp"
#include "ma2scale/problems.hpp"
#include "ma2scale/solvers.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ma2 {

enum class SolverKind { Newton, Perron };
enum class InitKind { Poisson, Prolong, Hull };

/// Fully resolved inputs of one solve.
struct SolveSetup {
    std::string benchmark; // empty for user-defined problems
    ProblemSpec problem;
    int mesh_n = 32;
    int directions_D = 0;
    double delta = 0.0;
    SolverKind solver = SolverKind::Newton;
    InitKind init = InitKind::Poisson;
    NewtonOptions newton;
    PerronOptions perron;
    double sign_eps = 1e-6;
    long long seed = 0;
};

/// Builds a SolveSetup from a flat config; collects unknown-key warnings.
SolveSetup setup_from_config(const Config& config, std::vector<std::string>* warnings = nullptr);

struct SolveOutcome {
    std::unique_ptr<TriangleMesh> mesh;
    std::unique_ptr<DirectionSet> directions;
    StencilTable stencils;
    NodalField field;
    OperatorEval eval; // operator at the returned field
    SolverKind solver = SolverKind::Newton;
    bool converged = false;
    std::string failure; // empty when converged
    NewtonReport newton_report;
    PerronReport perron_report;
    std::optional<double> linf_error;
    double delta = 0.0;
    double runtime_seconds = 0.0;
    double sign_eps = 1e-6;
    long long seed = 0;
    std::string benchmark;
};

SolveOutcome run_solve(const SolveSetup& setup);

/// Writes field.csv, operator.csv, signs.csv and report.json into out_dir.
void write_solve_outputs(const SolveOutcome& outcome, const ProblemSpec& problem,
                         const std::filesystem::path& out_dir);

struct StudyRow {
    double h = 0.0; // lattice spacing 2^-(5+level)
    int N = 0;      // degrees of freedom
    int P = 0;      // stencil points per node
    double linf_error = 0.0;
    int newton_steps = 0;
    double runtime_seconds = 0.0;
    bool converged = false;
};

struct LevelOutcome {
    int level;
    const TriangleMesh& mesh;
    const DirectionSet& directions;
    double delta;
    const NodalField& field;
    const NewtonReport& newton_report;
    bool converged;
};

struct StudyResult {
    std::string benchmark;
    std::vector<StudyRow> rows;
    double rate_slope = 0.0; // least-squares slope of log error vs log h
};

/// Runs levels h = 2^-5 .. 2^-(4+levels) with the benchmark's delta/P rules
/// and init policy. Nonconvergent levels are flagged and the study continues.
StudyResult run_study(const Benchmark& bench, int levels,
                      SolverKind solver = SolverKind::Newton,
                      const NewtonOptions& newton_options = {},
                      const PerronOptions& perron_options = {},
                      const std::function<void(const LevelOutcome&)>& observer = {});

void write_table_csv(const StudyResult& result, const std::filesystem::path& path);
void write_study_json(const StudyResult& result, const std::filesystem::path& path);

} // namespace ma2
