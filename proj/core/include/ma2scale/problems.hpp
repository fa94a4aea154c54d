#pragma once

#include "ma2scale/solvers.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ma2 {

enum class InitPolicy {
    PoissonThenProlong, // Poisson guess on the coarsest level, prolong afterwards
    PoissonEachLevel,   // fresh Poisson guess on every level
};

/// One of the built-in benchmark problems with its parameter regime:
/// delta = delta_c * h^alpha per level (h the lattice spacing 2^-(5+l))
/// and the stencil point budget P per level.
struct Benchmark {
    std::string name;
    ProblemSpec problem;
    double delta_alpha = 0.5;
    double delta_c = 1.0;
    std::vector<int> P_per_level;
    InitPolicy init_policy = InitPolicy::PoissonThenProlong;
    int base_n = 32; // level 0 mesh subdivisions (h = 2^-5)

    int max_levels() const { return static_cast<int>(P_per_level.size()); }
    /// Lattice spacing at a level, 2^-(5+level).
    double lattice_h(int level) const;
    double delta(int level) const;
    int direction_count(int level) const; // D = P/4 + 1
};

/// name in {smooth, discontinuous, unbounded}; throws for unknown names.
Benchmark builtin(std::string_view name);

/// L-infinity nodal error against the benchmark's exact solution.
double exact_error(const NodalField& field, const Benchmark& bench);

} // namespace ma2
