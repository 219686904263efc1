#include <benchmark/benchmark.h>

#include "mmskit/gen.hpp"
#include "mmskit/oracle.hpp"
#include "mmskit/verify.hpp"

namespace {

mmskit::Instance bench_instance(int n, int m, std::uint64_t seed) {
    mmskit::GenSpec spec;
    spec.seed = seed;
    spec.n_min = spec.n_max = n;
    spec.m_min = spec.m_max = m;
    return mmskit::generate(spec);
}

mmskit::Execution exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? mmskit::Execution::serial : mmskit::Execution::parallel;
}

void BM_Exhaustive(benchmark::State& state) {
    const auto inst = bench_instance(3, static_cast<int>(state.range(1)), 7);
    const mmskit::ExhaustiveOptions opts{mmskit::kDefaultExhaustiveCap, exec_of(state)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmskit::mms_exhaustive(inst, 1, 3, mmskit::Bundle::range(inst.m()), opts));
    }
}
BENCHMARK(BM_Exhaustive)->ArgsProduct({{0, 1}, {9, 11}})->Unit(benchmark::kMillisecond);

void BM_MmsAllAgents(benchmark::State& state) {
    const auto inst = bench_instance(6, static_cast<int>(state.range(1)), 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmskit::mms_all(inst, {}, exec_of(state)));
    }
}
BENCHMARK(BM_MmsAllAgents)->ArgsProduct({{0, 1}, {14, 18}})->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& state) {
    const auto inst = bench_instance(5, 15, 3);
    mmskit::Allocation alloc;
    alloc.bundles.resize(5);
    alloc.unassigned = mmskit::Bundle::range(inst.m());
    mmskit::PipelineOptions opts;
    opts.exec = exec_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmskit::check_alpha_mms(inst, alloc, mmskit::Rational(3, 4), opts));
    }
}
BENCHMARK(BM_Verify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
