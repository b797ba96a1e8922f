/**
 * @file bench_specular.cpp
 * @brief Throughput of shadows, interval unions, ray tracing, line sampling and chain permutations.
 */
#include <benchmark/benchmark.h>

#include <random>

#include "specular/block.hpp"
#include "specular/interval_set.hpp"
#include "specular/measure.hpp"
#include "specular/mirror.hpp"
#include "specular/projection.hpp"
#include "specular/tracer.hpp"
#include "specular/urchin.hpp"

using namespace specular;

namespace {

Scene random_scene(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> pos(-1.0, 1.0), ang(0.0, kTwoPi), len(0.01, 0.1);
    Scene s;
    for (std::size_t i = 0; i < n; ++i) {
        const Point c(pos(g), pos(g));
        const Point d = unit(ang(g)) * len(g);
        s.segments.push_back(Segment{c - d, c + d});
    }
    return s;
}

const UrchinScene& relaxed_urchin() {
    static const UrchinScene u = [] {
        const UrchinParams p = solve_parameters(1.0, UrchinOverrides{20, 0.1, 0.9});
        return build_urchin(p, scaled(build_block(BlockSpec{1.0, p.theta1(), 0.9, 10}, 1e-3, 1), p.rho));
    }();
    return u;
}

}  // namespace

static void BM_IntervalUnion(benchmark::State& state) {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Interval> raw(static_cast<std::size_t>(state.range(0)));
    for (auto& iv : raw) {
        const double a = u(g);
        iv = {a, a + 0.01 * u(g)};
    }
    for (auto _ : state) {
        IntervalSet s(raw);
        benchmark::DoNotOptimize(s.measure());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntervalUnion)->Range(64, 1 << 16);

static void BM_ShadowMeasure(benchmark::State& state) {
    const Scene s = random_scene(static_cast<std::size_t>(state.range(0)), 2);
    double theta = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(shadow_measure(s, theta));
        theta += 0.001;
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ShadowMeasure)->Range(64, 1 << 16);

static void BM_VerifyBlock(benchmark::State& state) {
    const Scene block = build_block(BlockSpec{1.0, 0.3, 0.7, 10}, 1e-3, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_block(block, BlockSpec{1.0, 0.3, 0.7, 10}, 1e-3, 1));
    }
}
BENCHMARK(BM_VerifyBlock)->Unit(benchmark::kMillisecond);

static void BM_TraceRandomScene(benchmark::State& state) {
    const Scene s = random_scene(static_cast<std::size_t>(state.range(0)), 3);
    const SceneIndex index(s);
    const auto lines = sample_lines(4096, 4);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& l = lines[i++ % lines.size()];
        benchmark::DoNotOptimize(trace(index, l.v(), l.w() * 1.5));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TraceRandomScene)->Range(64, 1 << 14);

static void BM_TraceUrchin(benchmark::State& state) {
    const SceneIndex index(relaxed_urchin().scene);
    const auto lines = sample_lines(4096, 5);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& l = lines[i++ % lines.size()];
        benchmark::DoNotOptimize(trace(index, l.v(), l.w()));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TraceUrchin);

static void BM_SampleLines(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sample_lines(static_cast<std::size_t>(state.range(0)), 6));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleLines)->Range(1 << 10, 1 << 16);

static void BM_ChainPermutation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(chain_permutation(n, 3, -5));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ChainPermutation)->Range(64, 1 << 20);

static void BM_ComposePermutations(benchmark::State& state) {
    const Permutation a = chain_permutation(static_cast<int>(state.range(0)), 1, 2).s;
    const Permutation b = chain_permutation(97, 2, 3).s;
    for (auto _ : state) benchmark::DoNotOptimize(compose(a, b));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 97);
}
BENCHMARK(BM_ComposePermutations)->Range(64, 1 << 12);

static void BM_ShadowZ(benchmark::State& state) {
    const Permutation s = chain_permutation(static_cast<int>(state.range(0)), 1, -1).s;
    for (auto _ : state) benchmark::DoNotOptimize(shadow_Z(s, kPi / 4.0, kPi / 2.0 + kPi / 8.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ShadowZ)->Range(64, 1 << 16);

BENCHMARK_MAIN();
