#include "ma2scale/solvers.hpp"

#include "ma2scale/hull.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ma2 {

namespace {

std::vector<double> interior_f_values(const TriangleMesh& mesh, const ScalarFunc& f) {
    const auto interior = mesh.interior_nodes();
    std::vector<double> vals(interior.size());
    for (std::size_t k = 0; k < interior.size(); ++k) {
        const double v = f(mesh.vertex(interior[k]));
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("problem: f must be finite and nonnegative at interior nodes");
        vals[k] = v;
    }
    return vals;
}

/// Lumped L2 norm of (f - T[u]) over interior nodes.
double residual_norm(const TriangleMesh& mesh, const StencilTable& stencils,
                     std::span<const double> f_vals, const OperatorEval& eval) {
    std::vector<double> r(static_cast<std::size_t>(mesh.vertex_count()), 0.0);
    for (int k = 0; k < stencils.interior_count(); ++k)
        r[static_cast<std::size_t>(stencils.node_id(k))] =
            f_vals[static_cast<std::size_t>(k)] - eval.value[static_cast<std::size_t>(k)];
    return lumped_l2_norm(mesh, r);
}

} // namespace

NodalField poisson_initial_guess(const TriangleMesh& mesh, const ProblemSpec& problem) {
    const ScalarFunc rhs = [&problem](Point2 p) {
        const double fv = problem.f(p);
        return std::sqrt(std::max(2.0 * fv, 0.0));
    };
    PoissonSystem sys = assemble_p1_poisson(mesh, rhs, problem.g);
    std::vector<double> x;
    try {
        x = factor_and_solve(sys.matrix, sys.load);
    } catch (const LinearSolverError&) {
        x = cg_solve(sys.matrix, sys.load);
    }
    NodalField u0(mesh);
    for (int b : mesh.boundary_nodes()) u0[b] = problem.g(mesh.vertex(b));
    const auto interior = mesh.interior_nodes();
    for (std::size_t k = 0; k < interior.size(); ++k) u0[interior[k]] = x[k];
    return u0;
}

SparseMatrix assemble_jacobian(const NodalField& field, const OperatorEval& eval,
                               const StencilTable& stencils) {
    (void)field;
    const TriangleMesh& mesh = stencils.mesh();
    std::vector<SparseMatrix::Triplet> trips;
    trips.reserve(static_cast<std::size_t>(mesh.vertex_count()) +
                  static_cast<std::size_t>(stencils.interior_count()) * 14);
    for (int b : mesh.boundary_nodes()) trips.push_back({b, b, 1.0});

    for (int k = 0; k < stencils.interior_count(); ++k) {
        const int gi = stencils.node_id(k);
        const int j = eval.argmin_pair[static_cast<std::size_t>(k)];
        const double sa = eval.sdd_at(k, j, 0);
        const double sb = eval.sdd_at(k, j, 1);
        // H+(s) * (other sdd)^+ - H-(s), with H+(0) = 0 and H-(0) = -1
        const double coeff[2] = {sa > 0.0 ? std::max(sb, 0.0) : 1.0,
                                 sb > 0.0 ? std::max(sa, 0.0) : 1.0};
        const double step = stencils.rho(k) * stencils.delta();
        const double scale = 1.0 / (step * step);
        for (int dir = 0; dir < 2; ++dir) {
            if (coeff[dir] == 0.0) continue;
            const double w = coeff[dir] * scale;
            for (int side = 0; side < 2; ++side) {
                const auto& hit = stencils.hit(k, j, 2 * dir + side);
                for (int v = 0; v < 3; ++v)
                    trips.push_back({gi, hit.vertices[static_cast<std::size_t>(v)],
                                     w * hit.weights[static_cast<std::size_t>(v)]});
            }
            trips.push_back({gi, gi, -2.0 * w});
        }
    }
    return SparseMatrix::from_triplets(mesh.vertex_count(), mesh.vertex_count(), std::move(trips));
}

NewtonResult newton_solve(const ProblemSpec& problem, const TriangleMesh& mesh,
                          const TwoScaleParams& params, NodalField init,
                          const NewtonOptions& options) {
    if (init.mesh != &mesh) throw std::invalid_argument("newton_solve: init built on another mesh");
    const double gsup = [&] {
        double s = 0.0;
        for (int b : mesh.boundary_nodes()) s = std::max(s, std::abs(problem.g(mesh.vertex(b))));
        return s;
    }();
    for (int b : mesh.boundary_nodes())
        if (std::abs(init[b] - problem.g(mesh.vertex(b))) > 1e-10 * (1.0 + gsup))
            throw std::invalid_argument("newton_solve: init boundary values differ from I_h g");

    const StencilTable stencils = build_stencils(mesh, params);
    const auto f_vals = interior_f_values(mesh, problem.f);
    const int N = mesh.vertex_count();

    NewtonReport report;
    NodalField u = std::move(init);
    OperatorEval eval = apply_operator(u, stencils);
    double res = residual_norm(mesh, stencils, f_vals, eval);
    report.initial_residual = res;
    report.residual_history.push_back(res);

    // absolute floor at the round-off level of the operator evaluation:
    // second differences carry O(eps * ||u|| / (rho delta)^2) noise
    double min_step = params.delta;
    for (int k = 0; k < stencils.interior_count(); ++k)
        min_step = std::min(min_step, stencils.rho(k) * params.delta);
    double f_max = 0.0, u_max = 0.0;
    for (double v : f_vals) f_max = std::max(f_max, v);
    for (double v : u.values) u_max = std::max(u_max, std::abs(v));
    const double noise_floor =
        32.0 * 2.220446049250313e-16 * (f_max + u_max / (min_step * min_step));
    const double target = std::max(options.rtol * res, noise_floor);

    while (res > target && res > 0.0) {
        if (report.iterations >= options.max_iter) {
            report.final_residual = res;
            throw NewtonFailure("newton_solve: iteration budget exhausted", report, u);
        }
        const SparseMatrix J = assemble_jacobian(u, eval, stencils);
        std::vector<double> rhs(static_cast<std::size_t>(N), 0.0);
        for (int k = 0; k < stencils.interior_count(); ++k)
            rhs[static_cast<std::size_t>(stencils.node_id(k))] =
                f_vals[static_cast<std::size_t>(k)] - eval.value[static_cast<std::size_t>(k)];
        std::vector<double> w = solve_sparse(J, rhs);
        for (int b : mesh.boundary_nodes()) w[static_cast<std::size_t>(b)] = 0.0;

        double tau = 1.0;
        bool accepted = false;
        for (int bt = 0; bt <= options.max_backtracks; ++bt) {
            NodalField trial = u;
            for (int i = 0; i < N; ++i) trial[i] += tau * w[static_cast<std::size_t>(i)];
            OperatorEval trial_eval = apply_operator(trial, stencils);
            const double trial_res = residual_norm(mesh, stencils, f_vals, trial_eval);
            if (trial_res < res) {
                u = std::move(trial);
                eval = std::move(trial_eval);
                res = trial_res;
                report.damping_history.push_back(tau);
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) {
            report.final_residual = res;
            throw NewtonFailure("newton_solve: damping exhausted without residual decrease", report, u);
        }
        ++report.iterations;
        report.residual_history.push_back(res);
    }

    report.converged = true;
    report.final_residual = res;
    report.discretely_convex = is_discretely_convex(u, stencils).convex;
    return {std::move(u), std::move(report)};
}

NodalField hull_subsolution(const TriangleMesh& mesh, const ProblemSpec& problem,
                            const TwoScaleParams& params) {
    const StencilTable stencils = build_stencils(mesh, params);
    const auto f_vals = interior_f_values(mesh, problem.f);
    double f_sup = 0.0;
    for (double v : f_vals) f_sup = std::max(f_sup, v);
    const double tol = 1e-9 * (1.0 + f_sup);

    const auto loop = mesh.boundary_loop();
    std::vector<Point2> loop_pts(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) loop_pts[i] = mesh.vertex(loop[i]);

    double c = std::sqrt(f_sup); // quadratic coefficient ||f||^(1/d), d = 2
    for (int attempt = 0; attempt < 8; ++attempt) {
        const double cc = c;
        auto q = [cc](Point2 p) { return 0.5 * cc * (p.x * p.x + p.y * p.y); };

        std::vector<double> lifted(loop.size());
        for (std::size_t i = 0; i < loop.size(); ++i)
            lifted[i] = problem.g(loop_pts[i]) - q(loop_pts[i]);
        const LowerHull hull(loop_pts, lifted);

        NodalField field(mesh);
        for (int i : mesh.interior_nodes())
            field[i] = q(mesh.vertex(i)) + hull.evaluate(mesh.vertex(i));
        for (int b : mesh.boundary_nodes()) field[b] = problem.g(mesh.vertex(b));

        const OperatorEval eval = apply_operator(field, stencils);
        bool ok = true;
        for (int k = 0; k < stencils.interior_count() && ok; ++k)
            ok = eval.value[static_cast<std::size_t>(k)] >= f_vals[static_cast<std::size_t>(k)] - tol;
        if (ok) return field;
        c = (c == 0.0) ? 1.0 : 2.0 * c;
    }
    throw Error("hull_subsolution: could not verify T >= f after coefficient retries");
}

PerronResult perron_solve(const ProblemSpec& problem, const TriangleMesh& mesh,
                          const TwoScaleParams& params, NodalField sub,
                          const PerronOptions& options) {
    if (sub.mesh != &mesh) throw std::invalid_argument("perron_solve: field built on another mesh");
    const StencilTable stencils = build_stencils(mesh, params);
    const auto f_vals = interior_f_values(mesh, problem.f);

    double g_sup = 0.0, b_max = -1e300;
    for (int b : mesh.boundary_nodes()) {
        const double gv = problem.g(mesh.vertex(b));
        g_sup = std::max(g_sup, std::abs(gv));
        b_max = std::max(b_max, gv);
        if (std::abs(sub[b] - gv) > 1e-10 * (1.0 + g_sup))
            throw std::invalid_argument("perron_solve: sub boundary values differ from I_h g");
    }
    const double node_tol =
        options.node_tol > 0.0 ? options.node_tol : 1e-10 * (1.0 + g_sup);
    const double sub_slack = 1e-9 * (1.0 + g_sup + std::sqrt(f_vals.empty() ? 0.0 : 1.0));

    const int m = stencils.interior_count();
    const int D = stencils.pair_count();
    NodalField u = std::move(sub);
    PerronReport report;

    // per-direction affine form sdd(t) = base + slope * t in the central value t
    std::vector<double> base(static_cast<std::size_t>(2) * D), slope(static_cast<std::size_t>(2) * D);
    auto T_of = [&](double t) {
        double best = 1e300;
        for (int j = 0; j < D; ++j) {
            const double sa = base[static_cast<std::size_t>(2 * j)] + slope[static_cast<std::size_t>(2 * j)] * t;
            const double sb = base[static_cast<std::size_t>(2 * j + 1)] + slope[static_cast<std::size_t>(2 * j + 1)] * t;
            best = std::min(best, pair_value(sa, sb));
        }
        return best;
    };

    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        double max_update = 0.0;
        for (int k = 0; k < m; ++k) {
            const int gi = stencils.node_id(k);
            const double step = stencils.rho(k) * stencils.delta();
            const double inv = 1.0 / (step * step);
            for (int j = 0; j < D; ++j) {
                for (int dir = 0; dir < 2; ++dir) {
                    double acc = 0.0, wi = 0.0;
                    for (int side = 0; side < 2; ++side) {
                        const auto& hit = stencils.hit(k, j, 2 * dir + side);
                        for (int v = 0; v < 3; ++v) {
                            if (hit.vertices[static_cast<std::size_t>(v)] == gi)
                                wi += hit.weights[static_cast<std::size_t>(v)];
                            else
                                acc += hit.weights[static_cast<std::size_t>(v)] *
                                       u[hit.vertices[static_cast<std::size_t>(v)]];
                        }
                    }
                    base[static_cast<std::size_t>(2 * j + dir)] = acc * inv;
                    slope[static_cast<std::size_t>(2 * j + dir)] = (wi - 2.0) * inv;
                }
            }
            const double cur = u[gi];
            const double f_i = f_vals[static_cast<std::size_t>(k)];
            if (T_of(cur) < f_i - sub_slack)
                throw std::invalid_argument("perron_solve: field is not a discrete subsolution at node " +
                                            std::to_string(gi));
            if (T_of(cur) <= f_i) continue; // already solved at this node
            double lo = cur, hi = std::max(cur, b_max);
            if (T_of(hi) > f_i) continue; // flat bracket; keep the current value
            while (hi - lo > node_tol) {
                const double mid = 0.5 * (lo + hi);
                if (T_of(mid) > f_i)
                    lo = mid;
                else
                    hi = mid;
            }
            // keep the lower end: T(lo) >= f preserves the subsolution property
            u[gi] = lo;
            max_update = std::max(max_update, lo - cur);
        }
        ++report.sweeps;
        report.update_history.push_back(max_update);
        report.last_update = max_update;
        if (max_update < node_tol) {
            report.converged = true;
            return {std::move(u), std::move(report)};
        }
    }
    throw PerronFailure("perron_solve: sweep budget exhausted", report, u);
}

} // namespace ma2
