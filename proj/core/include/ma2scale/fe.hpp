#pragma once

#include "ma2scale/mesh.hpp"
#include "ma2scale/sparse.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ma2 {

using ScalarFunc = std::function<double(Point2)>;

/// A continuous piecewise linear function stored as nodal values.
struct NodalField {
    const TriangleMesh* mesh = nullptr;
    std::vector<double> values;

    NodalField() = default;
    explicit NodalField(const TriangleMesh& m, double fill = 0.0)
        : mesh(&m), values(static_cast<std::size_t>(m.vertex_count()), fill) {}

    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(values.size()); }
};

/// Lagrange interpolant: values[i] = g(vertex_i). Throws std::invalid_argument
/// when g is not finite at some vertex.
NodalField interpolate(const TriangleMesh& mesh, const ScalarFunc& g);

/// Value of the field at a located point.
double evaluate(const NodalField& field, const BarycentricHit& hit);

/// m_i = one third of the total area of the triangles touching node i.
/// Masses are strictly positive and sum to the polygon area.
std::vector<double> lumped_masses(const TriangleMesh& mesh);

/// sqrt(sum_i m_i r_i^2) over all nodes; callers keep boundary entries zero
/// when the residual is an interior-node quantity.
double lumped_l2_norm(const TriangleMesh& mesh, std::span<const double> residual);

/// max_i |field(x_i) - exact(x_i)| over all nodes.
double linf_node_error(const NodalField& field, const ScalarFunc& exact);

/// Full P1 stiffness matrix over all nodes, no boundary treatment.
/// Row sums are zero (constants lie in the kernel).
SparseMatrix assemble_p1_stiffness(const TriangleMesh& mesh);

/// Dirichlet-eliminated P1 system for  laplace(u) = rhs, u = bc on the boundary.
/// The matrix is the SPD stiffness over interior nodes (ordered as
/// mesh.interior_nodes()); the load carries the vertex-rule quadrature of rhs
/// and the boundary lifting by bc.
struct PoissonSystem {
    SparseMatrix matrix;
    std::vector<double> load;
};
PoissonSystem assemble_p1_poisson(const TriangleMesh& mesh, const ScalarFunc& rhs,
                                  const ScalarFunc& bc);

} // namespace ma2
