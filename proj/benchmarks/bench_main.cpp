#include <benchmark/benchmark.h>

#include <random>

#include "fusion/dual.hpp"

using namespace fusion;

namespace {

std::shared_ptr<const Module> module_m() {
    static auto m = [] {
        auto spec = ModuleSpec::virasoro(Rat(-2), Rat(-1, 8));
        spec.singular_relations = auto_detect_singular(spec, 2);
        return std::make_shared<Module>(spec);
    }();
    return m;
}

void BM_GramMatrix(benchmark::State& state) {
    const long level = state.range(0);
    for (auto _ : state) {
        // Fresh module each round so the level caches do not amortize away.
        Module verma(ModuleSpec::virasoro(Rat(-2), Rat(-1, 8)));
        benchmark::DoNotOptimize(verma.gram_matrix(level));
    }
}
BENCHMARK(BM_GramMatrix)->Arg(4)->Arg(5)->Arg(6);

void BM_KernelRandom(benchmark::State& state) {
    const size_t n = static_cast<size_t>(state.range(0));
    std::mt19937 rng(4711);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    RatMatrix m(n, n + 4);
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            Rat v(num(rng), den(rng));
            v.canonicalize();
            m.at(i, j) = v;
        }
    for (auto _ : state) benchmark::DoNotOptimize(kernel_basis(m));
}
BENCHMARK(BM_KernelRandom)->Arg(16)->Arg(32);

void BM_FuseDepth0(benchmark::State& state) {
    auto m = module_m();
    for (auto _ : state) benchmark::DoNotOptimize(fuse(m, m, 0, Rat(1), 4));
}
BENCHMARK(BM_FuseDepth0);

void BM_FuseDepth1(benchmark::State& state) {
    auto m = module_m();
    for (auto _ : state) benchmark::DoNotOptimize(fuse(m, m, 1, Rat(1), 5));
}
BENCHMARK(BM_FuseDepth1);

void BM_DualDepth0(benchmark::State& state) {
    auto m = module_m();
    for (auto _ : state) benchmark::DoNotOptimize(solve_dual(m, m, 0, Rat(1), 4));
}
BENCHMARK(BM_DualDepth0);

}  // namespace

BENCHMARK_MAIN();
