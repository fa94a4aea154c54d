#include "ma2scale/fe.hpp"

#include "ma2scale/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace ma2 {

NodalField interpolate(const TriangleMesh& mesh, const ScalarFunc& g) {
    NodalField f(mesh);
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        const double v = g(mesh.vertex(i));
        if (!std::isfinite(v))
            throw std::invalid_argument("interpolate: non-finite value at vertex " + std::to_string(i));
        f[i] = v;
    }
    return f;
}

double evaluate(const NodalField& field, const BarycentricHit& hit) {
    const auto& tri = field.mesh->triangle(hit.triangle);
    return hit.weights[0] * field[tri[0]] + hit.weights[1] * field[tri[1]] +
           hit.weights[2] * field[tri[2]];
}

std::vector<double> lumped_masses(const TriangleMesh& mesh) {
    std::vector<double> m(static_cast<std::size_t>(mesh.vertex_count()), 0.0);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const double third = mesh.triangle_area(t) / 3.0;
        for (int v : mesh.triangle(t)) m[static_cast<std::size_t>(v)] += third;
    }
    return m;
}

double lumped_l2_norm(const TriangleMesh& mesh, std::span<const double> residual) {
    if (static_cast<int>(residual.size()) != mesh.vertex_count())
        throw std::invalid_argument("lumped_l2_norm: residual size mismatch");
    const auto m = lumped_masses(mesh);
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * residual[i] * residual[i];
    return std::sqrt(s);
}

double linf_node_error(const NodalField& field, const ScalarFunc& exact) {
    double e = 0.0;
    for (int i = 0; i < field.mesh->vertex_count(); ++i)
        e = std::max(e, std::abs(field[i] - exact(field.mesh->vertex(i))));
    return e;
}

namespace {

/// Element stiffness: K_ij = e_i . e_j / (4 A) with e_i the edge opposite vertex i.
void element_stiffness(const TriangleMesh& mesh, int t, double K[3][3]) {
    const auto& tri = mesh.triangle(t);
    const Point2 a = mesh.vertex(tri[0]);
    const Point2 b = mesh.vertex(tri[1]);
    const Point2 c = mesh.vertex(tri[2]);
    const Point2 e[3] = {c - b, a - c, b - a};
    const double inv4A = 1.0 / (4.0 * mesh.triangle_area(t));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            K[i][j] = dot(e[i], e[j]) * inv4A;
}

} // namespace

SparseMatrix assemble_p1_stiffness(const TriangleMesh& mesh) {
    std::vector<SparseMatrix::Triplet> trips;
    trips.reserve(static_cast<std::size_t>(9) * mesh.triangle_count());
    double K[3][3];
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        element_stiffness(mesh, t, K);
        const auto& tri = mesh.triangle(t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trips.push_back({tri[static_cast<std::size_t>(i)], tri[static_cast<std::size_t>(j)], K[i][j]});
    }
    return SparseMatrix::from_triplets(mesh.vertex_count(), mesh.vertex_count(), std::move(trips));
}

PoissonSystem assemble_p1_poisson(const TriangleMesh& mesh, const ScalarFunc& rhs,
                                  const ScalarFunc& bc) {
    const auto interior = mesh.interior_nodes();
    const int n = static_cast<int>(interior.size());
    std::vector<int> interior_index(static_cast<std::size_t>(mesh.vertex_count()), -1);
    for (int k = 0; k < n; ++k) interior_index[static_cast<std::size_t>(interior[static_cast<std::size_t>(k)])] = k;

    std::vector<SparseMatrix::Triplet> trips;
    std::vector<double> load(static_cast<std::size_t>(n), 0.0);
    double K[3][3];
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        if (mesh.triangle_area(t) <= 0.0) throw MeshError("assembly on degenerate triangle");
        element_stiffness(mesh, t, K);
        const auto& tri = mesh.triangle(t);
        for (int i = 0; i < 3; ++i) {
            const int gi = tri[static_cast<std::size_t>(i)];
            const int ii = interior_index[static_cast<std::size_t>(gi)];
            if (ii < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int gj = tri[static_cast<std::size_t>(j)];
                const int jj = interior_index[static_cast<std::size_t>(gj)];
                if (jj >= 0)
                    trips.push_back({ii, jj, K[i][j]});
                else
                    load[static_cast<std::size_t>(ii)] -= K[i][j] * bc(mesh.vertex(gj));
            }
        }
    }
    // weak form of laplace(u) = rhs: K u = -(rhs, phi_i), vertex quadrature
    const auto masses = lumped_masses(mesh);
    for (int k = 0; k < n; ++k) {
        const int gi = interior[static_cast<std::size_t>(k)];
        load[static_cast<std::size_t>(k)] -= masses[static_cast<std::size_t>(gi)] * rhs(mesh.vertex(gi));
    }
    PoissonSystem sys;
    sys.matrix = SparseMatrix::from_triplets(n, n, std::move(trips));
    sys.load = std::move(load);
    return sys;
}

} // namespace ma2
