#include "ma2scale/study.hpp"

#include "ma2scale/csv.hpp"

#include <json.hpp>

#include <fstream>

namespace ma2 {

namespace {

void write_field_csv(const NodalField& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "id,x,y,value\n";
    for (int i = 0; i < field.mesh->vertex_count(); ++i) {
        const Point2 p = field.mesh->vertex(i);
        out << i << ',' << csv_double(p.x) << ',' << csv_double(p.y) << ','
            << csv_double(field[i]) << '\n';
    }
}

void write_operator_csv(const StencilTable& stencils, const OperatorEval& eval,
                        const DirectionSet& dirs, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "id,T_value,argmin_angle\n";
    for (int k = 0; k < stencils.interior_count(); ++k) {
        const int pair = eval.argmin_pair[static_cast<std::size_t>(k)];
        out << stencils.node_id(k) << ',' << csv_double(eval.value[static_cast<std::size_t>(k)])
            << ',' << csv_double(dirs.pairs[static_cast<std::size_t>(pair)].angle) << '\n';
    }
}

const char* sign_name(SignClass c) {
    switch (c) {
    case SignClass::Negative: return "negative";
    case SignClass::Positive: return "positive";
    default: return "zero";
    }
}

void write_signs_csv(const StencilTable& stencils, const SignMap& map,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "id,x,y,class,residual\n";
    for (int k = 0; k < stencils.interior_count(); ++k) {
        const int id = stencils.node_id(k);
        const Point2 p = stencils.mesh().vertex(id);
        out << id << ',' << csv_double(p.x) << ',' << csv_double(p.y) << ','
            << sign_name(map.cls[static_cast<std::size_t>(k)]) << ','
            << csv_double(map.residual[static_cast<std::size_t>(k)]) << '\n';
    }
}

} // namespace

void write_solve_outputs(const SolveOutcome& outcome, const ProblemSpec& problem,
                         const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_field_csv(outcome.field, out_dir / "field.csv");
    write_operator_csv(outcome.stencils, outcome.eval, *outcome.directions, out_dir / "operator.csv");
    const SignMap signs =
        truncation_error_map(outcome.field, problem.f, outcome.stencils, outcome.sign_eps);
    write_signs_csv(outcome.stencils, signs, out_dir / "signs.csv");

    nlohmann::json j;
    j["solver"] = outcome.solver == SolverKind::Newton ? "newton" : "perron";
    if (!outcome.benchmark.empty()) j["benchmark"] = outcome.benchmark;
    j["converged"] = outcome.converged;
    if (!outcome.failure.empty()) j["failure"] = outcome.failure;
    j["mesh"] = {{"N", outcome.mesh->vertex_count()},
                 {"h", outcome.mesh->mesh_size()},
                 {"interior_nodes", static_cast<int>(outcome.mesh->interior_nodes().size())}};
    j["params"] = {{"delta", outcome.delta},
                   {"D", outcome.directions->pair_count()},
                   {"P", outcome.directions->point_count()},
                   {"theta", outcome.directions->theta}};
    if (outcome.solver == SolverKind::Newton) {
        const NewtonReport& r = outcome.newton_report;
        j["iterations"] = r.iterations;
        j["residual_history"] = r.residual_history;
        j["damping_history"] = r.damping_history;
        j["initial_residual"] = r.initial_residual;
        j["final_residual"] = r.final_residual;
        j["discretely_convex"] = r.discretely_convex;
    } else {
        const PerronReport& r = outcome.perron_report;
        j["sweeps"] = r.sweeps;
        j["last_update"] = r.last_update;
    }
    if (outcome.linf_error) j["linf_error"] = *outcome.linf_error;
    j["runtime_seconds"] = outcome.runtime_seconds;
    j["seed"] = outcome.seed;
    std::ofstream out(out_dir / "report.json");
    if (!out) throw Error("cannot write report.json");
    out << j.dump(2) << '\n';
}

void write_table_csv(const StudyResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "h,N,P,linf_error,newton_steps,runtime_seconds,converged\n";
    for (const auto& row : result.rows) {
        out << csv_double(row.h) << ',' << row.N << ',' << row.P << ','
            << csv_double(row.linf_error) << ',' << row.newton_steps << ','
            << csv_double(row.runtime_seconds) << ',' << (row.converged ? 1 : 0) << '\n';
    }
}

void write_study_json(const StudyResult& result, const std::filesystem::path& path) {
    nlohmann::json j;
    j["benchmark"] = result.benchmark;
    j["rate_slope"] = result.rate_slope;
    auto rows = nlohmann::json::array();
    for (const auto& row : result.rows)
        rows.push_back({{"h", row.h},
                        {"N", row.N},
                        {"P", row.P},
                        {"linf_error", row.linf_error},
                        {"newton_steps", row.newton_steps},
                        {"runtime_seconds", row.runtime_seconds},
                        {"converged", row.converged}});
    j["rows"] = rows;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace ma2
