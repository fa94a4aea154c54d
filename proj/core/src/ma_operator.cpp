#include "ma2scale/ma_operator.hpp"

#include "ma2scale/errors.hpp"
#include "ma2scale/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ma2 {

void TwoScaleParams::validate(const TriangleMesh& mesh) const {
    if (!(h > 0.0) || !(delta >= h))
        throw std::invalid_argument("two-scale params need 0 < h <= delta");
    if (!(delta < mesh.diameter()))
        throw std::invalid_argument("delta must be smaller than the domain diameter");
    if (directions == nullptr || directions->pair_count() < 2)
        throw std::invalid_argument("two-scale params need a direction set");
}

StencilTable build_stencils(const TriangleMesh& mesh, const TwoScaleParams& params) {
    params.validate(mesh);
    const DirectionSet& dirs = *params.directions;
    const int D = dirs.pair_count();
    const auto interior = mesh.interior_nodes();
    const int m = static_cast<int>(interior.size());

    StencilTable table;
    table.mesh_ = &mesh;
    table.directions_ = &dirs;
    table.delta_ = params.delta;
    table.pair_count_ = D;
    table.rho_.resize(static_cast<std::size_t>(m));
    table.node_ids_.assign(interior.begin(), interior.end());
    table.interior_index_.assign(static_cast<std::size_t>(mesh.vertex_count()), -1);
    for (int k = 0; k < m; ++k)
        table.interior_index_[static_cast<std::size_t>(interior[static_cast<std::size_t>(k)])] = k;
    table.hits_.resize(static_cast<std::size_t>(m) * D * 4);

    auto flatten = [&mesh](const BarycentricHit& hit) {
        StencilTable::Hit h;
        h.vertices = mesh.triangle(hit.triangle);
        h.weights = hit.weights;
        return h;
    };

    // Pairs whose directions coincide with an earlier pair up to sign or
    // rotation (the angle-pi/2 pair vs the angle-0 pair in the standard set)
    // share offsets; detect that once so each distinct point is located once.
    // share[j] = (k, mapping of sides) or k = -1 when pair j is fresh.
    struct Share {
        int source = -1;
        std::array<int, 4> side_map{};
    };
    std::vector<Share> share(static_cast<std::size_t>(D));
    for (int j = 0; j < D; ++j) {
        const Point2 vj = dirs.pairs[static_cast<std::size_t>(j)].v;
        for (int k = 0; k < j && share[static_cast<std::size_t>(j)].source < 0; ++k) {
            const Point2 vk = dirs.pairs[static_cast<std::size_t>(k)].v;
            const Point2 vkp = dirs.pairs[static_cast<std::size_t>(k)].v_perp;
            Share s;
            s.source = k;
            if (vj.x == vk.x && vj.y == vk.y)
                s.side_map = {0, 1, 2, 3};
            else if (vj.x == -vk.x && vj.y == -vk.y)
                s.side_map = {1, 0, 3, 2};
            else if (vj.x == vkp.x && vj.y == vkp.y)
                s.side_map = {2, 3, 1, 0};
            else if (vj.x == -vkp.x && vj.y == -vkp.y)
                s.side_map = {3, 2, 0, 1};
            else
                continue;
            share[static_cast<std::size_t>(j)] = s;
        }
    }

    parallel_for(m, [&](std::int64_t k) {
        const int gi = interior[static_cast<std::size_t>(k)];
        const Point2 xi = mesh.vertex(gi);
        const double rho = std::min(1.0, mesh.boundary_distance(xi) / params.delta);
        table.rho_[static_cast<std::size_t>(k)] = rho;
        const double step = rho * params.delta;
        StencilTable::Hit* node_hits = &table.hits_[static_cast<std::size_t>(k) * D * 4];
        for (int j = 0; j < D; ++j) {
            const Share& s = share[static_cast<std::size_t>(j)];
            if (s.source >= 0) {
                for (int side = 0; side < 4; ++side)
                    node_hits[j * 4 + side] =
                        node_hits[s.source * 4 + s.side_map[static_cast<std::size_t>(side)]];
                continue;
            }
            const DirectionPair& pair = dirs.pairs[static_cast<std::size_t>(j)];
            try {
                node_hits[j * 4 + 0] = flatten(mesh.locate(xi + step * pair.v));
                node_hits[j * 4 + 1] = flatten(mesh.locate(xi - step * pair.v));
                node_hits[j * 4 + 2] = flatten(mesh.locate(xi + step * pair.v_perp));
                node_hits[j * 4 + 3] = flatten(mesh.locate(xi - step * pair.v_perp));
            } catch (const OutOfDomainError&) {
                throw Error("stencil point of node " + std::to_string(gi) +
                            " left the domain (internal geometry error)");
            }
        }
    });
    return table;
}

namespace {

inline double eval_hit(const NodalField& field, const StencilTable::Hit& h) {
    return h.weights[0] * field[h.vertices[0]] + h.weights[1] * field[h.vertices[1]] +
           h.weights[2] * field[h.vertices[2]];
}

} // namespace

double second_difference(const NodalField& field, const StencilTable& stencils,
                         int k, int pair, int dir) {
    const double step = stencils.rho(k) * stencils.delta();
    const double center = field[stencils.node_id(k)];
    const double plus = eval_hit(field, stencils.hit(k, pair, 2 * dir));
    const double minus = eval_hit(field, stencils.hit(k, pair, 2 * dir + 1));
    return (plus - 2.0 * center + minus) / (step * step);
}

OperatorEval apply_operator(const NodalField& field, const StencilTable& stencils) {
    if (field.mesh != &stencils.mesh())
        throw std::invalid_argument("apply_operator: field/stencil mesh mismatch");
    const int m = stencils.interior_count();
    const int D = stencils.pair_count();
    OperatorEval eval;
    eval.pair_count = D;
    eval.value.resize(static_cast<std::size_t>(m));
    eval.argmin_pair.resize(static_cast<std::size_t>(m));
    eval.sdd.resize(static_cast<std::size_t>(m) * D * 2);

    parallel_for(m, [&](std::int64_t k) {
        double best = 0.0;
        int best_pair = -1;
        for (int j = 0; j < D; ++j) {
            const double sa = second_difference(field, stencils, static_cast<int>(k), j, 0);
            const double sb = second_difference(field, stencils, static_cast<int>(k), j, 1);
            eval.sdd[(static_cast<std::size_t>(k) * D + j) * 2 + 0] = sa;
            eval.sdd[(static_cast<std::size_t>(k) * D + j) * 2 + 1] = sb;
            const double v = pair_value(sa, sb);
            if (best_pair < 0 || v < best) {
                best = v;
                best_pair = j;
            }
        }
        eval.value[static_cast<std::size_t>(k)] = best;
        eval.argmin_pair[static_cast<std::size_t>(k)] = best_pair;
    });
    return eval;
}

ConvexityCheck is_discretely_convex(const NodalField& field, const StencilTable& stencils) {
    double sup = 0.0;
    for (double v : field.values) sup = std::max(sup, std::abs(v));
    const double tol = 1e-9 / (stencils.delta() * stencils.delta()) * sup;

    ConvexityCheck check;
    const int m = stencils.interior_count();
    const int D = stencils.pair_count();
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < D; ++j) {
            for (int dir = 0; dir < 2; ++dir) {
                const double s = second_difference(field, stencils, k, j, dir);
                check.worst = std::min(check.worst, s);
                if (s < -tol && check.convex) {
                    check.convex = false;
                    check.node = stencils.node_id(k);
                    check.pair = j;
                    check.dir = dir;
                }
            }
        }
    }
    return check;
}

SignMap truncation_error_map(const NodalField& field, const ScalarFunc& f,
                             const StencilTable& stencils, double eps) {
    const OperatorEval eval = apply_operator(field, stencils);
    const int m = stencils.interior_count();
    SignMap map;
    map.cls.resize(static_cast<std::size_t>(m));
    map.residual.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double e = f(stencils.mesh().vertex(stencils.node_id(k))) - eval.value[static_cast<std::size_t>(k)];
        map.residual[static_cast<std::size_t>(k)] = e;
        map.cls[static_cast<std::size_t>(k)] =
            e < -eps ? SignClass::Negative : (e > eps ? SignClass::Positive : SignClass::Zero);
    }
    return map;
}

std::vector<int> delta_interior_nodes(const TriangleMesh& mesh, double delta) {
    // distance to the boundary is concave on a convex domain, so a triangle
    // lies in the delta-interior iff all three vertex distances are >= delta
    std::vector<double> dist(static_cast<std::size_t>(mesh.vertex_count()));
    for (int i = 0; i < mesh.vertex_count(); ++i)
        dist[static_cast<std::size_t>(i)] = mesh.boundary_distance(mesh.vertex(i));
    std::vector<char> in_region(static_cast<std::size_t>(mesh.vertex_count()), 0);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangle(t);
        if (dist[static_cast<std::size_t>(tri[0])] >= delta &&
            dist[static_cast<std::size_t>(tri[1])] >= delta &&
            dist[static_cast<std::size_t>(tri[2])] >= delta)
            for (int v : tri) in_region[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<int> nodes;
    for (int i : mesh.interior_nodes())
        if (in_region[static_cast<std::size_t>(i)]) nodes.push_back(i);
    return nodes;
}

} // namespace ma2
