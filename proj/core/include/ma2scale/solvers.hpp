#pragma once

#include "ma2scale/errors.hpp"
#include "ma2scale/fe.hpp"
#include "ma2scale/ma_operator.hpp"
#include "ma2scale/sparse.hpp"

#include <optional>
#include <vector>

namespace ma2 {

/// Dirichlet problem data: det D2u = f in Omega, u = g on the boundary,
/// with f >= 0 and an optional exact solution for error reporting.
struct ProblemSpec {
    ScalarFunc f;
    ScalarFunc g;
    std::optional<ScalarFunc> exact;
};

struct NewtonOptions {
    double rtol = 1e-8;
    int max_iter = 100;
    int max_backtracks = 30;
};

struct NewtonReport {
    int iterations = 0;
    std::vector<double> residual_history; // lumped L2 residual per iterate
    std::vector<double> damping_history;  // accepted tau per step
    bool converged = false;
    bool discretely_convex = false;
    double initial_residual = 0.0;
    double final_residual = 0.0;
};

struct NewtonResult {
    NodalField field;
    NewtonReport report;
};

/// Thrown when damping is exhausted or the iteration budget runs out;
/// carries the report and the last iterate.
class NewtonFailure : public Error {
public:
    NewtonFailure(const std::string& what, NewtonReport report, NodalField partial)
        : Error(what), report_(std::move(report)), partial_(std::move(partial)) {}
    const NewtonReport& report() const { return report_; }
    const NodalField& partial_field() const { return partial_; }

private:
    NewtonReport report_;
    NodalField partial_;
};

/// Galerkin P1 solution of  laplace(u0) = sqrt(2 f),  u0 = g on the boundary
/// (the d=2 form of (d! f)^(1/d)); tiny negative f round-off is clamped to 0.
NodalField poisson_initial_guess(const TriangleMesh& mesh, const ProblemSpec& problem);

/// Slant-derivative Jacobian of the operator at the argmin pair of each
/// interior node (Danskin selection); boundary rows are identity. Row i sums
///   [H+(sdd_j) * prod_{k!=j} sdd_k^+  -  H-(sdd_j)] x (sdd stencil weights)
/// over the two directions j of the minimizing pair, with H+(0) = 0 and
/// H-(0) = -1.
SparseMatrix assemble_jacobian(const NodalField& field, const OperatorEval& eval,
                               const StencilTable& stencils);

/// Damped semi-smooth Newton iteration for T[u] = f with Dirichlet data
/// preserved exactly. Stops when the lumped L2 residual drops below
/// rtol * (initial residual). tau halves from 1 until the residual strictly
/// decreases.
NewtonResult newton_solve(const ProblemSpec& problem, const TriangleMesh& mesh,
                          const TwoScaleParams& params, NodalField init,
                          const NewtonOptions& options = {});

/// Discrete subsolution: I_h q plus the convex envelope of the lifted
/// boundary data (x_i, g(x_i) - q(x_i)), with q = 0.5 ||f||^(1/2) |x|^2.
/// Boundary nodes carry g exactly. The subsolution property T >= f is
/// verified; on failure the quadratic coefficient doubles (bounded retries).
NodalField hull_subsolution(const TriangleMesh& mesh, const ProblemSpec& problem,
                            const TwoScaleParams& params);

struct PerronOptions {
    double node_tol = -1.0; // < 0: auto 1e-10 * (1 + ||g||_inf)
    int max_sweeps = 100000;
};

struct PerronReport {
    int sweeps = 0;
    bool converged = false;
    double last_update = 0.0;
    std::vector<double> update_history; // max nodal update per sweep
};

struct PerronResult {
    NodalField field;
    PerronReport report;
};

class PerronFailure : public Error {
public:
    PerronFailure(const std::string& what, PerronReport report, NodalField partial)
        : Error(what), report_(std::move(report)), partial_(std::move(partial)) {}
    const PerronReport& report() const { return report_; }
    const NodalField& partial_field() const { return partial_; }

private:
    PerronReport report_;
    NodalField partial_;
};

/// Perron reference solver: Gauss-Seidel sweeps in ascending node id; at each
/// node the scalar equation T[u](x_i) = f(x_i) is solved by bisection on
/// [current value, max boundary g] (the operator is strictly decreasing in
/// the central value). Iterates are nondecreasing nodewise. Positioned as a
/// verification oracle for coarse meshes.
PerronResult perron_solve(const ProblemSpec& problem, const TriangleMesh& mesh,
                          const TwoScaleParams& params, NodalField sub,
                          const PerronOptions& options = {});

} // namespace ma2
