#include "ma2scale/ma_operator.hpp"
#include "ma2scale/solvers.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace ma2;

namespace {

const TriangleMesh& mesh64() {
    static const TriangleMesh mesh = TriangleMesh::unit_square(64);
    return mesh;
}

const DirectionSet& dirs7() {
    static const DirectionSet dirs = build_direction_set(7);
    return dirs;
}

TwoScaleParams params64() { return {mesh64().mesh_size(), 1.5 * std::sqrt(1.0 / 64.0), &dirs7()}; }

void BM_locate(benchmark::State& state) {
    const auto& mesh = mesh64();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (auto _ : state) {
        const Point2 p{uni(rng), uni(rng)};
        benchmark::DoNotOptimize(mesh.locate(p));
    }
}
BENCHMARK(BM_locate);

void BM_boundary_distance(benchmark::State& state) {
    const auto& mesh = mesh64();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (auto _ : state) {
        const Point2 p{uni(rng), uni(rng)};
        benchmark::DoNotOptimize(mesh.boundary_distance(p));
    }
}
BENCHMARK(BM_boundary_distance);

void BM_build_stencils(benchmark::State& state) {
    const auto params = params64();
    for (auto _ : state)
        benchmark::DoNotOptimize(build_stencils(mesh64(), params));
}
BENCHMARK(BM_build_stencils)->Unit(benchmark::kMillisecond);

void BM_apply_operator(benchmark::State& state) {
    const auto params = params64();
    const auto table = build_stencils(mesh64(), params);
    const auto field = interpolate(mesh64(), [](Point2 p) {
        return std::exp(0.5 * (p.x * p.x + p.y * p.y));
    });
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_operator(field, table));
}
BENCHMARK(BM_apply_operator)->Unit(benchmark::kMillisecond);

void BM_assemble_jacobian(benchmark::State& state) {
    const auto params = params64();
    const auto table = build_stencils(mesh64(), params);
    const auto field = interpolate(mesh64(), [](Point2 p) {
        return std::exp(0.5 * (p.x * p.x + p.y * p.y));
    });
    const auto eval = apply_operator(field, table);
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_jacobian(field, eval, table));
}
BENCHMARK(BM_assemble_jacobian)->Unit(benchmark::kMillisecond);

} // namespace
