#include "ma2scale/mesh.hpp"

#include "ma2scale/csv.hpp"
#include "ma2scale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ma2 {

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

namespace {

struct EdgeKey {
    int a, b; // a < b
    bool operator<(const EdgeKey& o) const { return a < o.a || (a == o.a && b < o.b); }
};

EdgeKey make_edge(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

} // namespace

TriangleMesh TriangleMesh::unit_square(int n) {
    if (n < 2) throw std::invalid_argument("unit_square: n must be >= 2");
    TriangleMesh m;
    const int stride = n + 1;
    m.vertices_.reserve(static_cast<std::size_t>(stride) * stride);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            m.vertices_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    m.triangles_.reserve(static_cast<std::size_t>(2) * n * n);
    // all cells split along the lower-left -> upper-right diagonal
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = j * stride + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + stride;
            const int v11 = v01 + 1;
            m.triangles_.push_back({v00, v10, v11});
            m.triangles_.push_back({v00, v11, v01});
        }
    }
    m.finalize(MeshLimits{});
    return m;
}

TriangleMesh TriangleMesh::from_data(std::vector<Point2> vertices,
                                     std::vector<std::array<int, 3>> triangles,
                                     const MeshLimits& limits) {
    TriangleMesh m;
    m.vertices_ = std::move(vertices);
    m.triangles_ = std::move(triangles);
    m.finalize(limits);
    return m;
}

void TriangleMesh::finalize(const MeshLimits& limits) {
    limits_ = limits;
    const int nv = vertex_count();
    const int nt = triangle_count();
    if (nv < 3 || nt < 1) throw MeshError("mesh needs at least 3 vertices and 1 triangle");
    for (const auto& p : vertices_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw MeshError("non-finite vertex coordinate");

    // areas, h, shape regularity
    areas_.resize(static_cast<std::size_t>(nt));
    total_area_ = 0.0;
    h_ = 0.0;
    for (int t = 0; t < nt; ++t) {
        const auto& tri = triangles_[static_cast<std::size_t>(t)];
        for (int k = 0; k < 3; ++k)
            if (tri[static_cast<std::size_t>(k)] < 0 || tri[static_cast<std::size_t>(k)] >= nv)
                throw MeshError("triangle vertex index out of range");
        const Point2 a = vertices_[static_cast<std::size_t>(tri[0])];
        const Point2 b = vertices_[static_cast<std::size_t>(tri[1])];
        const Point2 c = vertices_[static_cast<std::size_t>(tri[2])];
        const double area2 = signed_area2(a, b, c);
        if (area2 <= 0.0) throw MeshError("triangle " + std::to_string(t) + " is degenerate or clockwise");
        areas_[static_cast<std::size_t>(t)] = 0.5 * area2;
        total_area_ += 0.5 * area2;
        const double ea = distance(a, b), eb = distance(b, c), ec = distance(c, a);
        const double longest = std::max({ea, eb, ec});
        h_ = std::max(h_, longest);
        const double inradius = area2 / (ea + eb + ec); // 2*area/perimeter
        if (longest / inradius > limits.shape_regularity)
            throw MeshError("triangle " + std::to_string(t) + " violates shape regularity bound");
    }

    // edge sharing: conformity + boundary extraction
    std::map<EdgeKey, int> edge_count;
    std::map<EdgeKey, std::array<int, 2>> edge_dir; // directed (u,v) as it appears in a CCW triangle
    for (int t = 0; t < nt; ++t) {
        const auto& tri = triangles_[static_cast<std::size_t>(t)];
        for (int k = 0; k < 3; ++k) {
            const int u = tri[static_cast<std::size_t>(k)];
            const int v = tri[static_cast<std::size_t>((k + 1) % 3)];
            auto key = make_edge(u, v);
            if (++edge_count[key] > 2)
                throw MeshError("non-conforming mesh: edge shared by more than two triangles");
            edge_dir[key] = {u, v};
        }
    }
    // Euler characteristic of a triangulated disk: V - E + T = 1
    if (nv - static_cast<int>(edge_count.size()) + nt != 1)
        throw MeshError("non-conforming mesh: Euler characteristic is not that of a disk");

    // boundary edges appear once; walk them into a single loop
    std::map<int, int> next_on_boundary; // u -> v following triangle orientation (domain on the left)
    node_class_.assign(static_cast<std::size_t>(nv), NodeClass::Interior);
    int boundary_edges = 0;
    for (const auto& [key, cnt] : edge_count) {
        if (cnt != 1) continue;
        ++boundary_edges;
        const auto [u, v] = edge_dir[key];
        if (next_on_boundary.count(u))
            throw MeshError("non-conforming mesh: boundary is not a simple loop");
        next_on_boundary[u] = v;
        node_class_[static_cast<std::size_t>(u)] = NodeClass::Boundary;
        node_class_[static_cast<std::size_t>(v)] = NodeClass::Boundary;
    }
    if (boundary_edges < 3) throw MeshError("mesh has no boundary loop");

    // start the loop at the lowest boundary vertex id for determinism
    int start = -1;
    for (int i = 0; i < nv; ++i)
        if (node_class_[static_cast<std::size_t>(i)] == NodeClass::Boundary) { start = i; break; }
    boundary_loop_.clear();
    int cur = start;
    do {
        boundary_loop_.push_back(cur);
        auto it = next_on_boundary.find(cur);
        if (it == next_on_boundary.end())
            throw MeshError("non-conforming mesh: broken boundary loop");
        cur = it->second;
        if (static_cast<int>(boundary_loop_.size()) > boundary_edges)
            throw MeshError("non-conforming mesh: boundary loop does not close");
    } while (cur != start);
    if (static_cast<int>(boundary_loop_.size()) != boundary_edges)
        throw MeshError("mesh boundary is not a single loop");

    // convexity: all boundary turns in one direction (collinear nodes allowed)
    const int nb = static_cast<int>(boundary_loop_.size());
    for (int k = 0; k < nb; ++k) {
        const Point2 a = vertices_[static_cast<std::size_t>(boundary_loop_[static_cast<std::size_t>(k)])];
        const Point2 b = vertices_[static_cast<std::size_t>(boundary_loop_[static_cast<std::size_t>((k + 1) % nb)])];
        const Point2 c = vertices_[static_cast<std::size_t>(boundary_loop_[static_cast<std::size_t>((k + 2) % nb)])];
        if (signed_area2(a, b, c) < -1e-12 * h_ * h_)
            throw MeshError("computational domain is not convex");
    }

    interior_nodes_.clear();
    boundary_nodes_.clear();
    for (int i = 0; i < nv; ++i) {
        if (node_class_[static_cast<std::size_t>(i)] == NodeClass::Interior)
            interior_nodes_.push_back(i);
        else
            boundary_nodes_.push_back(i);
    }

    // diameter over boundary vertices (hull of the domain)
    diameter_ = 0.0;
    for (int i = 0; i < nb; ++i)
        for (int j = i + 1; j < nb; ++j)
            diameter_ = std::max(diameter_, distance(
                vertices_[static_cast<std::size_t>(boundary_loop_[static_cast<std::size_t>(i)])],
                vertices_[static_cast<std::size_t>(boundary_loop_[static_cast<std::size_t>(j)])]));

    // background grid: ceil(extent/h) cells per side, triangles registered in
    // every cell overlapping their bounding box
    bbox_min_ = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    bbox_max_ = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const auto& p : vertices_) {
        bbox_min_.x = std::min(bbox_min_.x, p.x);
        bbox_min_.y = std::min(bbox_min_.y, p.y);
        bbox_max_.x = std::max(bbox_max_.x, p.x);
        bbox_max_.y = std::max(bbox_max_.y, p.y);
    }
    const double wx = std::max(bbox_max_.x - bbox_min_.x, 1e-30);
    const double wy = std::max(bbox_max_.y - bbox_min_.y, 1e-30);
    grid_nx_ = std::max(1, static_cast<int>(std::ceil(wx / h_)));
    grid_ny_ = std::max(1, static_cast<int>(std::ceil(wy / h_)));
    cell_dx_ = wx / grid_nx_;
    cell_dy_ = wy / grid_ny_;
    grid_cells_.assign(static_cast<std::size_t>(grid_nx_) * grid_ny_, {});
    for (int t = 0; t < nt; ++t) {
        const auto& tri = triangles_[static_cast<std::size_t>(t)];
        double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (int k = 0; k < 3; ++k) {
            const Point2 p = vertices_[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
            xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
        }
        const int i0 = std::clamp(static_cast<int>((xmin - bbox_min_.x) / cell_dx_), 0, grid_nx_ - 1);
        const int i1 = std::clamp(static_cast<int>((xmax - bbox_min_.x) / cell_dx_), 0, grid_nx_ - 1);
        const int j0 = std::clamp(static_cast<int>((ymin - bbox_min_.y) / cell_dy_), 0, grid_ny_ - 1);
        const int j1 = std::clamp(static_cast<int>((ymax - bbox_min_.y) / cell_dy_), 0, grid_ny_ - 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                grid_cells_[static_cast<std::size_t>(j) * grid_nx_ + i].push_back(t);
    }
    // triangle ids per cell stay sorted (insertion order is ascending t)

    // boundary nodes must lie on the loop (they do by construction); interior
    // nodes strictly inside: positive distance to the boundary polygon
    for (int i : interior_nodes_)
        if (boundary_distance(vertices_[static_cast<std::size_t>(i)]) <= 0.0)
            throw MeshError("interior node " + std::to_string(i) + " lies on the boundary");
}

bool TriangleMesh::barycentric_in(int t, Point2 p, std::array<double, 3>& w) const {
    const auto& tri = triangles_[static_cast<std::size_t>(t)];
    const Point2 a = vertices_[static_cast<std::size_t>(tri[0])];
    const Point2 b = vertices_[static_cast<std::size_t>(tri[1])];
    const Point2 c = vertices_[static_cast<std::size_t>(tri[2])];
    const double area2 = signed_area2(a, b, c);
    const double w1 = signed_area2(a, p, c) / area2; // weight of b
    const double w2 = signed_area2(a, b, p) / area2; // weight of c
    const double w0 = 1.0 - w1 - w2;
    w = {w0, w1, w2};
    const double tol = limits_.location_tol;
    return w0 >= -tol && w1 >= -tol && w2 >= -tol;
}

BarycentricHit TriangleMesh::locate(Point2 p) const {
    const double tol = limits_.location_tol;
    if (p.x < bbox_min_.x - tol || p.x > bbox_max_.x + tol ||
        p.y < bbox_min_.y - tol || p.y > bbox_max_.y + tol)
        throw OutOfDomainError("point outside the computational domain");
    const int ci = std::clamp(static_cast<int>((p.x - bbox_min_.x) / cell_dx_), 0, grid_nx_ - 1);
    const int cj = std::clamp(static_cast<int>((p.y - bbox_min_.y) / cell_dy_), 0, grid_ny_ - 1);
    std::array<double, 3> w;
    for (int t : grid_cells_[static_cast<std::size_t>(cj) * grid_nx_ + ci])
        if (barycentric_in(t, p, w)) return {t, w};
    // a query exactly on a cell line can land in the neighbor cell; widen once
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            const int ni = ci + di, nj = cj + dj;
            if (ni < 0 || ni >= grid_nx_ || nj < 0 || nj >= grid_ny_) continue;
            for (int t : grid_cells_[static_cast<std::size_t>(nj) * grid_nx_ + ni])
                if (barycentric_in(t, p, w)) return {t, w};
        }
    }
    throw OutOfDomainError("point outside the computational domain");
}

double TriangleMesh::boundary_distance(Point2 p) const {
    const int nb = static_cast<int>(boundary_loop_.size());
    double d = std::numeric_limits<double>::max();
    for (int k = 0; k < nb; ++k) {
        const Point2 a = vertices_[static_cast<std::size_t>(boundary_loop_[static_cast<std::size_t>(k)])];
        const Point2 b = vertices_[static_cast<std::size_t>(boundary_loop_[static_cast<std::size_t>((k + 1) % nb)])];
        d = std::min(d, point_segment_distance(p, a, b));
    }
    return d;
}

void TriangleMesh::dump_csv(const std::filesystem::path& vertices_csv,
                            const std::filesystem::path& triangles_csv) const {
    std::ofstream vf(vertices_csv);
    if (!vf) throw Error("cannot write " + vertices_csv.string());
    vf << "id,x,y,class\n";
    for (int i = 0; i < vertex_count(); ++i) {
        const Point2 p = vertices_[static_cast<std::size_t>(i)];
        vf << i << ',' << csv_double(p.x) << ',' << csv_double(p.y) << ','
           << (is_interior(i) ? "interior" : "boundary") << '\n';
    }
    std::ofstream tf(triangles_csv);
    if (!tf) throw Error("cannot write " + triangles_csv.string());
    tf << "id,v0,v1,v2\n";
    for (int t = 0; t < triangle_count(); ++t) {
        const auto& tri = triangles_[static_cast<std::size_t>(t)];
        tf << t << ',' << tri[0] << ',' << tri[1] << ',' << tri[2] << '\n';
    }
}

TriangleMesh TriangleMesh::load_csv(const std::filesystem::path& vertices_csv,
                                    const std::filesystem::path& triangles_csv,
                                    const MeshLimits& limits) {
    auto vlines = read_lines(vertices_csv.string());
    auto tlines = read_lines(triangles_csv.string());
    if (vlines.empty() || tlines.empty()) throw Error("empty mesh csv");
    std::vector<Point2> vertices;
    std::vector<std::string> classes;
    for (std::size_t k = 1; k < vlines.size(); ++k) {
        auto f = csv_split(vlines[k]);
        if (f.size() != 4) throw Error("vertices.csv: expected 4 columns");
        const int id = std::stoi(f[0]);
        if (id != static_cast<int>(vertices.size())) throw Error("vertices.csv: ids must be dense and ordered");
        vertices.push_back({std::stod(f[1]), std::stod(f[2])});
        classes.push_back(f[3]);
    }
    std::vector<std::array<int, 3>> triangles;
    for (std::size_t k = 1; k < tlines.size(); ++k) {
        auto f = csv_split(tlines[k]);
        if (f.size() != 4) throw Error("triangles.csv: expected 4 columns");
        const int id = std::stoi(f[0]);
        if (id != static_cast<int>(triangles.size())) throw Error("triangles.csv: ids must be dense and ordered");
        triangles.push_back({std::stoi(f[1]), std::stoi(f[2]), std::stoi(f[3])});
    }
    TriangleMesh m = from_data(std::move(vertices), std::move(triangles), limits);
    for (int i = 0; i < m.vertex_count(); ++i) {
        const bool file_interior = classes[static_cast<std::size_t>(i)] == "interior";
        if (file_interior != m.is_interior(i))
            throw Error("vertices.csv: node class of " + std::to_string(i) + " disagrees with topology");
    }
    return m;
}

std::vector<double> Prolongation::apply(std::span<const double> coarse) const {
    std::vector<double> fine(parents.size());
    for (std::size_t i = 0; i < parents.size(); ++i) {
        const auto [a, b] = parents[i];
        fine[i] = 0.5 * (coarse[static_cast<std::size_t>(a)] + coarse[static_cast<std::size_t>(b)]);
    }
    return fine;
}

std::pair<TriangleMesh, Prolongation> refine_uniform(const TriangleMesh& mesh) {
    std::vector<Point2> vertices;
    vertices.reserve(static_cast<std::size_t>(mesh.vertex_count()));
    for (int i = 0; i < mesh.vertex_count(); ++i) vertices.push_back(mesh.vertex(i));

    Prolongation prolong;
    prolong.parents.reserve(vertices.size());
    for (int i = 0; i < mesh.vertex_count(); ++i) prolong.parents.push_back({i, i});

    std::map<EdgeKey, int> midpoint; // edge -> fine vertex id
    auto midpoint_of = [&](int u, int v) {
        const EdgeKey key = make_edge(u, v);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int id = static_cast<int>(vertices.size());
        vertices.push_back(0.5 * (mesh.vertex(u) + mesh.vertex(v)));
        prolong.parents.push_back({key.a, key.b});
        midpoint.emplace(key, id);
        return id;
    };

    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(static_cast<std::size_t>(4) * mesh.triangle_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto [a, b, c] = mesh.triangle(t);
        const int ab = midpoint_of(a, b);
        const int bc = midpoint_of(b, c);
        const int ca = midpoint_of(c, a);
        triangles.push_back({a, ab, ca});
        triangles.push_back({ab, b, bc});
        triangles.push_back({ca, bc, c});
        triangles.push_back({ab, bc, ca});
    }
    TriangleMesh fine = TriangleMesh::from_data(std::move(vertices), std::move(triangles), mesh.limits());
    return {std::move(fine), std::move(prolong)};
}

} // namespace ma2
