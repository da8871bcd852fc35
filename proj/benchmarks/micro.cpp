#include <benchmark/benchmark.h>

#include <cde/dv.hpp>
#include <cde/im.hpp>
#include <cde/model.hpp>
#include <cde/oracle.hpp>
#include <cde/sumrate.hpp>

namespace {

constexpr int kPackets = 50;
constexpr double kDensity = 0.5;

cde::Instance instance_for(const benchmark::State& state) {
    return cde::random_instance(static_cast<int>(state.range(0)), kPackets, kDensity, 7);
}

void BM_UnionSize(benchmark::State& state) {
    const auto inst = instance_for(state);
    const auto all = cde::Coalition::all(inst.num_clients());
    cde::EvalContext ctx;
    for (auto _ : state) benchmark::DoNotOptimize(cde::union_size(ctx, inst, all));
}
BENCHMARK(BM_UnionSize)->RangeMultiplier(2)->Range(4, 64);

void BM_LowerBound(benchmark::State& state) {
    const auto inst = instance_for(state);
    for (auto _ : state) {
        cde::EvalContext ctx;
        benchmark::DoNotOptimize(cde::sumrate::lower_bound(ctx, inst));
    }
}
BENCHMARK(BM_LowerBound)->RangeMultiplier(2)->Range(4, 64);

// Merge search on the singleton partition at the lower bound, where the
// first merge of a solve happens.
void BM_FindMergeCand(benchmark::State& state) {
    const auto inst = instance_for(state);
    const auto w = cde::Partition::singletons(inst.num_clients());
    cde::EvalContext lb_ctx;
    const auto alpha = cde::sumrate::lower_bound(lb_ctx, inst);
    for (auto _ : state) {
        cde::EvalContext ctx;
        benchmark::DoNotOptimize(cde::im::find_merge_cand(ctx, inst, w, alpha));
    }
}
BENCHMARK(BM_FindMergeCand)->DenseRange(4, 12, 2);

void BM_Solve(benchmark::State& state) {
    const auto inst = instance_for(state);
    std::uint64_t gamma = 0;
    for (auto _ : state) {
        cde::EvalContext ctx;
        benchmark::DoNotOptimize(cde::im::solve(ctx, inst, 0));
        gamma = ctx.gamma();
    }
    state.counters["gamma"] = static_cast<double>(gamma);
}
BENCHMARK(BM_Solve)->DenseRange(5, 40, 5)->Unit(benchmark::kMicrosecond);

// MAC enumeration is exponential in K.
void BM_DvSolve(benchmark::State& state) {
    const auto inst = instance_for(state);
    for (auto _ : state) benchmark::DoNotOptimize(cde::dv::dv_solve(inst));
}
BENCHMARK(BM_DvSolve)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);

void BM_MinSumRateEnumeration(benchmark::State& state) {
    const auto inst = instance_for(state);
    for (auto _ : state) {
        cde::EvalContext ctx;
        benchmark::DoNotOptimize(cde::oracle::min_sum_rate(ctx, inst));
    }
}
BENCHMARK(BM_MinSumRateEnumeration)->DenseRange(3, 8)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
