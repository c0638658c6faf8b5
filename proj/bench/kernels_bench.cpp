// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "rangereach/kernels.hpp"
#include "rangereach/verify.hpp"

namespace {

using namespace rangereach;

struct Fixture {
    GeosocialGraph graph;
    ReachIndex index;
    std::vector<Query> queries;
};

const Fixture& fixture() {
    static const Fixture f = [] {
        Fixture x;
        x.graph = generate_graph(20000, 20000, 5, 5, 1);
        x.index = ReachIndex::build(x.graph, Variant::Pointer);
        std::mt19937_64 rng(2);
        x.queries = random_queries(x.graph, 20000, rng);
        return x;
    }();
    return f;
}

void BM_AnswerSerial(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(answer_batch_serial(f.index, f.queries));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.queries.size()));
}

void BM_AnswerParallel(benchmark::State& state) {
    const auto& f = fixture();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(answer_batch_parallel(f.index, f.queries, threads));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.queries.size()));
}

void BM_OracleSerial(benchmark::State& state) {
    const auto& f = fixture();
    const std::span<const Query> batch(f.queries.data(), 200);
    for (auto _ : state) benchmark::DoNotOptimize(oracle_batch_serial(f.graph, batch));
}

void BM_OracleParallel(benchmark::State& state) {
    const auto& f = fixture();
    const std::span<const Query> batch(f.queries.data(), 200);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(oracle_batch_parallel(f.graph, batch, threads));
}

}  // namespace

BENCHMARK(BM_AnswerSerial)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_AnswerParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_OracleSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OracleParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
