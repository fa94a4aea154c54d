#pragma once

#include "ma2scale/geometry.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace ma2 {

enum class NodeClass : std::uint8_t { Interior = 0, Boundary = 1 };

struct BarycentricHit {
    int triangle = -1;
    std::array<double, 3> weights{};
};

/// Validation knobs for mesh construction.
struct MeshLimits {
    double shape_regularity = 16.0; // max (longest edge)/(inradius) per triangle
    double location_tol = 1e-10;    // barycentric weights accepted down to -location_tol
};

/// Conforming triangulation of a convex polygon with node classification and
/// a background-grid point-location index. Immutable after construction; all
/// queries are pure and safe to call concurrently.
class TriangleMesh {
public:
    static TriangleMesh unit_square(int n);

    /// Builds from raw data; classifies nodes, orients the boundary loop,
    /// builds the locator and validates every structural invariant.
    static TriangleMesh from_data(std::vector<Point2> vertices,
                                  std::vector<std::array<int, 3>> triangles,
                                  const MeshLimits& limits = {});

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int triangle_count() const { return static_cast<int>(triangles_.size()); }
    const Point2& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
    const std::array<int, 3>& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }
    NodeClass node_class(int i) const { return node_class_[static_cast<std::size_t>(i)]; }
    bool is_interior(int i) const { return node_class(i) == NodeClass::Interior; }

    std::span<const int> interior_nodes() const { return interior_nodes_; }
    std::span<const int> boundary_nodes() const { return boundary_nodes_; }
    /// Ordered counterclockwise boundary vertex loop of the polygon.
    std::span<const int> boundary_loop() const { return boundary_loop_; }

    double mesh_size() const { return h_; }            // longest edge
    double triangle_area(int t) const { return areas_[static_cast<std::size_t>(t)]; }
    double domain_area() const { return total_area_; }
    double diameter() const { return diameter_; }
    const MeshLimits& limits() const { return limits_; }

    /// Point location with barycentric output. Ties on edges/vertices resolve
    /// to the lowest containing triangle id. Throws OutOfDomainError when p
    /// lies outside the closure by more than the location tolerance.
    BarycentricHit locate(Point2 p) const;

    /// Distance from p to the boundary polygon (0 on the boundary itself).
    double boundary_distance(Point2 p) const;

    void dump_csv(const std::filesystem::path& vertices_csv,
                  const std::filesystem::path& triangles_csv) const;
    static TriangleMesh load_csv(const std::filesystem::path& vertices_csv,
                                 const std::filesystem::path& triangles_csv,
                                 const MeshLimits& limits = {});

private:
    TriangleMesh() = default;
    void finalize(const MeshLimits& limits); // classification, loop, locator, checks

    std::vector<Point2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<NodeClass> node_class_;
    std::vector<int> interior_nodes_;
    std::vector<int> boundary_nodes_;
    std::vector<int> boundary_loop_;
    std::vector<double> areas_;
    double total_area_ = 0.0;
    double h_ = 0.0;
    double diameter_ = 0.0;
    MeshLimits limits_{};

    // background grid: cell (ix,iy) -> triangle ids overlapping its box
    int grid_nx_ = 0, grid_ny_ = 0;
    Point2 bbox_min_{}, bbox_max_{};
    double cell_dx_ = 0.0, cell_dy_ = 0.0;
    std::vector<std::vector<int>> grid_cells_;

    bool barycentric_in(int t, Point2 p, std::array<double, 3>& w) const;
};

/// Maps coarse nodal values to fine nodal values after uniform refinement.
/// Original vertices copy their value; edge midpoints average the endpoints.
struct Prolongation {
    std::vector<std::array<int, 2>> parents; // per fine node, two coarse parents
    std::vector<double> apply(std::span<const double> coarse) const;
};

/// Splits every triangle into four via edge midpoints. The prolongation
/// reproduces any coarse piecewise linear function exactly at all fine nodes.
std::pair<TriangleMesh, Prolongation> refine_uniform(const TriangleMesh& mesh);

} // namespace ma2
