// Serial reference vs OpenMP kernels.
//   bench_kernels --benchmark_filter=Distances
// Thread count follows OMP_NUM_THREADS.

#include "topood/bootstrap.hpp"
#include "topood/pointcloud.hpp"
#include "topood/synth.hpp"

#include <benchmark/benchmark.h>

using namespace topood;

namespace {

PointCloud embedding_like(std::size_t per_cluster, std::size_t dim) {
    SynthSpec s;
    s.kind = SynthKind::Clusters;
    s.k = 3;
    s.count = per_cluster;
    s.radius = 1.0;
    s.sigma = 0.1;
    s.dim = dim;
    s.seed = 3;
    return generate(s);
}

void BM_DistancesSerial(benchmark::State& state) {
    const auto cloud = embedding_like(static_cast<std::size_t>(state.range(0)) / 3, 512);
    for (auto _ : state) benchmark::DoNotOptimize(pairwise_distances_serial(cloud));
    state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}

void BM_DistancesParallel(benchmark::State& state) {
    const auto cloud = embedding_like(static_cast<std::size_t>(state.range(0)) / 3, 512);
    for (auto _ : state) benchmark::DoNotOptimize(pairwise_distances(cloud, Exec::Parallel));
    state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}

BootstrapConfig bench_config(std::int64_t n) {
    BootstrapConfig cfg;
    cfg.sample_size = static_cast<std::size_t>(n);
    cfg.iterations = 64;
    cfg.master_seed = 1;
    return cfg;
}

void BM_BootstrapSerial(benchmark::State& state) {
    const auto cloud = embedding_like(300, 512);
    const auto cfg = bench_config(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_bootstrap_serial(cloud, cfg));
    state.SetItemsProcessed(state.iterations() * 64);
}

void BM_BootstrapParallel(benchmark::State& state) {
    const auto cloud = embedding_like(300, 512);
    const auto cfg = bench_config(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_bootstrap(cloud, cfg));
    state.SetItemsProcessed(state.iterations() * 64);
}

} // namespace

BENCHMARK(BM_DistancesSerial)->Arg(150)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistancesParallel)->Arg(150)->Arg(600)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BootstrapSerial)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapParallel)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
