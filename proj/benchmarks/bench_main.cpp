#include "thermo/horocycle.hpp"
#include "thermo/julienne.hpp"
#include "thermo/pressure.hpp"
#include "thermo/product_states.hpp"

#include <benchmark/benchmark.h>

using namespace thermo;

static void BM_ExactIterate(benchmark::State& st) {
    const auto sys = ModelSystem::cat_map();
    const TorusPoint p(0.123, 0.456);
    for (auto _ : st)
        benchmark::DoNotOptimize(apply(sys, p, st.range(0)));
}
BENCHMARK(BM_ExactIterate)->Arg(10)->Arg(1000);

static void BM_SpanningLogSum(benchmark::State& st) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    for (auto _ : st)
        benchmark::DoNotOptimize(spanning_log_sum(sys, phi, 0.05, int(st.range(0))));
}
BENCHMARK(BM_SpanningLogSum)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

static void BM_LeafSolve(benchmark::State& st) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    for (auto _ : st)
        benchmark::DoNotOptimize(solve_leaf_state(sys, phi, default_unstable_window(sys), int(st.range(0))).P());
}
BENCHMARK(BM_LeafSolve)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_DeltaAlong(benchmark::State& st) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    for (auto _ : st)
        benchmark::DoNotOptimize(delta_along(sys, phi, Vec2(0.2, 0.3), 0.1, int(st.range(0))).value);
}
BENCHMARK(BM_DeltaAlong)->Arg(60)->Arg(120);

static void BM_AssembleGlobal(benchmark::State& st) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    CoverSpec c;
    c.resolution_k = 10;
    c.grid = int(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(assemble_global(sys, phi, c).total_mass());
}
BENCHMARK(BM_AssembleGlobal)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_JulienneMeasure(benchmark::State& st) {
    const auto sys = ModelSystem::cat_map();
    CoverSpec c;
    c.resolution_k = 10;
    c.grid = 8;
    const GlobalState g = assemble_global(sys, Potential::parse("cos:0.2", sys), c);
    JulienneSpec s;
    s.n = int(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(julienne_measure(g, s));
}
BENCHMARK(BM_JulienneMeasure)->Arg(2)->Arg(6);

static void BM_Equidistribution(benchmark::State& st) {
    const HoroFlow hf(ModelSystem::cat_map());
    for (auto _ : st)
        benchmark::DoNotOptimize(equidistribution(hf, Vec2(0.3, 0.7), double(st.range(0)), default_trig_tests()));
}
BENCHMARK(BM_Equidistribution)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
