#include "ma2scale/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace ma2 {

double Benchmark::lattice_h(int level) const {
    if (level < 0 || level >= max_levels())
        throw std::invalid_argument("benchmark level out of range");
    return std::pow(2.0, -(5 + level));
}

double Benchmark::delta(int level) const {
    return delta_c * std::pow(lattice_h(level), delta_alpha);
}

int Benchmark::direction_count(int level) const {
    return P_per_level[static_cast<std::size_t>(level)] / 4 + 1;
}

namespace {

double sq(double v) { return v * v; }

Benchmark make_smooth() {
    Benchmark b;
    b.name = "smooth";
    b.problem.exact = [](Point2 p) { return std::exp(0.5 * (sq(p.x) + sq(p.y))); };
    b.problem.f = [](Point2 p) {
        const double r2 = sq(p.x) + sq(p.y);
        return (1.0 + r2) * std::exp(r2);
    };
    b.problem.g = *b.problem.exact;
    b.delta_alpha = 0.5;
    b.delta_c = 1.5;
    b.P_per_level = {16, 24, 36, 52};
    b.init_policy = InitPolicy::PoissonThenProlong;
    return b;
}

Benchmark make_discontinuous() {
    Benchmark b;
    b.name = "discontinuous";
    const Point2 x0{0.5, 0.5};
    b.problem.exact = [x0](Point2 p) { return 0.5 * sq(std::max(distance(p, x0) - 0.2, 0.0)); };
    b.problem.f = [x0](Point2 p) {
        const double r = distance(p, x0);
        return r > 0.2 ? 1.0 - 0.2 / r : 0.0; // f = 0 inside the ball, including r = 0
    };
    b.problem.g = *b.problem.exact;
    b.delta_alpha = 0.8;
    b.delta_c = 2.65;
    b.P_per_level = {20, 28, 36, 48};
    b.init_policy = InitPolicy::PoissonThenProlong;
    return b;
}

Benchmark make_unbounded() {
    Benchmark b;
    b.name = "unbounded";
    b.problem.exact = [](Point2 p) { return -std::sqrt(2.0 - sq(p.x) - sq(p.y)); };
    b.problem.f = [](Point2 p) { return 2.0 / sq(2.0 - sq(p.x) - sq(p.y)); };
    b.problem.g = *b.problem.exact;
    b.delta_alpha = 0.5;
    b.P_per_level = {16, 24, 36, 52};
    b.init_policy = InitPolicy::PoissonEachLevel; // u is not W2-inf, no continuation
    return b;
}

} // namespace

Benchmark builtin(std::string_view name) {
    if (name == "smooth") return make_smooth();
    if (name == "discontinuous") return make_discontinuous();
    if (name == "unbounded") return make_unbounded();
    throw std::invalid_argument("unknown benchmark '" + std::string(name) +
                                "' (expected smooth, discontinuous or unbounded)");
}

double exact_error(const NodalField& field, const Benchmark& bench) {
    if (!bench.problem.exact)
        throw std::invalid_argument("benchmark '" + bench.name + "' has no exact solution");
    return linf_node_error(field, *bench.problem.exact);
}

} // namespace ma2
