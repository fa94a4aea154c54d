#pragma once

#include "ma2scale/directions.hpp"
#include "ma2scale/fe.hpp"
#include "ma2scale/mesh.hpp"

#include <array>
#include <vector>

namespace ma2 {

/// The two scales of the discretization: fine mesh size h and the coarse
/// step delta used by centered second differences.
struct TwoScaleParams {
    double h = 0.0;
    double delta = 0.0;
    const DirectionSet* directions = nullptr;

    /// Enforces 0 < h <= delta < diameter and a usable direction set.
    void validate(const TriangleMesh& mesh) const;
};

/// Per interior node and direction: the clipped step rho and the barycentric
/// evaluation data of the four stencil offsets. The angle-pi/2 pair shares
/// its offsets with the angle-0 pair, so each of the P = 4(D-1) distinct
/// points is located exactly once.
class StencilTable {
public:
    struct Hit {
        std::array<int, 3> vertices;
        std::array<double, 3> weights;
    };

    int interior_count() const { return static_cast<int>(rho_.size()); }
    int pair_count() const { return pair_count_; }
    double delta() const { return delta_; }
    double rho(int k) const { return rho_[static_cast<std::size_t>(k)]; }
    /// Global node id of interior index k.
    int node_id(int k) const { return node_ids_[static_cast<std::size_t>(k)]; }
    /// Interior index of a global node id, -1 for boundary nodes.
    int interior_index(int node_id) const { return interior_index_[static_cast<std::size_t>(node_id)]; }
    /// side: 0 -> +v, 1 -> -v, 2 -> +v_perp, 3 -> -v_perp.
    const Hit& hit(int k, int pair, int side) const {
        return hits_[(static_cast<std::size_t>(k) * pair_count_ + pair) * 4 + side];
    }
    const TriangleMesh& mesh() const { return *mesh_; }
    const DirectionSet& directions() const { return *directions_; }

private:
    friend StencilTable build_stencils(const TriangleMesh&, const TwoScaleParams&);
    const TriangleMesh* mesh_ = nullptr;
    const DirectionSet* directions_ = nullptr;
    double delta_ = 0.0;
    int pair_count_ = 0;
    std::vector<double> rho_;       // per interior node, min(1, dist/delta)
    std::vector<int> node_ids_;     // interior index -> node id (ascending)
    std::vector<int> interior_index_;
    std::vector<Hit> hits_;         // [node][pair][4]
};

StencilTable build_stencils(const TriangleMesh& mesh, const TwoScaleParams& params);

/// Centered second difference of a field at interior index k along one
/// direction of a pair (dir 0 -> v, 1 -> v_perp), scaled by (rho*delta)^-2.
double second_difference(const NodalField& field, const StencilTable& stencils,
                         int k, int pair, int dir);

/// Cached evaluation of the practical two-scale operator at every interior
/// node: the minimum over direction pairs of
///   prod_j sdd_j^+  -  sum_j sdd_j^-
/// together with the minimizing pair (ties to the lowest index) and all
/// second differences.
struct OperatorEval {
    std::vector<double> value;      // per interior node
    std::vector<int> argmin_pair;   // per interior node
    std::vector<double> sdd;        // [node][pair][2]
    int pair_count = 0;

    double sdd_at(int k, int pair, int dir) const {
        return sdd[(static_cast<std::size_t>(k) * pair_count + pair) * 2 + dir];
    }
};

OperatorEval apply_operator(const NodalField& field, const StencilTable& stencils);

/// Combines one pair's second differences into its operator contribution.
inline double pair_value(double sdd_a, double sdd_b) {
    const double pos = std::max(sdd_a, 0.0) * std::max(sdd_b, 0.0);
    const double neg = std::max(-sdd_a, 0.0) + std::max(-sdd_b, 0.0);
    return pos - neg;
}

/// Discrete convexity check: every cached second difference >= -tolerance
/// with tolerance 1e-9 * delta^-2 * ||field||_inf. Reports the first
/// violating (node, pair, direction).
struct ConvexityCheck {
    bool convex = true;
    int node = -1;   // global node id of the first violation
    int pair = -1;
    int dir = -1;
    double worst = 0.0; // most negative second difference seen
};
ConvexityCheck is_discretely_convex(const NodalField& field, const StencilTable& stencils);

/// Sign classes of the truncation error f - T[u] at interior nodes.
enum class SignClass : int { Negative = -1, Zero = 0, Positive = 1 };

struct SignMap {
    std::vector<SignClass> cls;      // per interior node
    std::vector<double> residual;    // f(x_i) - T[u](x_i)
};
SignMap truncation_error_map(const NodalField& field, const ScalarFunc& f,
                             const StencilTable& stencils, double eps = 1e-6);

/// Interior nodes belonging to at least one triangle entirely at distance
/// >= delta from the boundary (the delta-interior region where the operator
/// is consistent).
std::vector<int> delta_interior_nodes(const TriangleMesh& mesh, double delta);

} // namespace ma2
