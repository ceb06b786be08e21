#include <random>

#include <benchmark/benchmark.h>

#include "rsq/harness.hpp"
#include "rsq/skyline.hpp"

using namespace rsq;

namespace {

std::vector<DataObject> objects(std::size_t n, std::size_t dims) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(0.0, 400.0), val(0.0, 1.0);
    std::vector<DataObject> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].id = static_cast<NodeId>(i);
        out[i].position = {pos(rng), pos(rng)};
        std::vector<double> a(dims);
        for (auto& v : a) v = val(rng);
        out[i].attrs = AttributeVector::minimizing(std::move(a));
    }
    return out;
}

const QuerySnapshot kQuery{{200.0, 200.0}, 1e9};

void BM_PointSkyline(benchmark::State& st) {
    const auto objs = objects(static_cast<std::size_t>(st.range(0)), 3);
    for (auto _ : st) benchmark::DoNotOptimize(point_skyline(kQuery, objs));
    st.SetComplexityN(st.range(0));
}

void BM_PointSkylineParallel(benchmark::State& st) {
    const auto objs = objects(static_cast<std::size_t>(st.range(0)), 3);
    for (auto _ : st) benchmark::DoNotOptimize(point_skyline_parallel(kQuery, objs));
    st.SetComplexityN(st.range(0));
}

void BM_AllPairsReference(benchmark::State& st) {
    const auto objs = objects(static_cast<std::size_t>(st.range(0)), 3);
    for (auto _ : st) benchmark::DoNotOptimize(reference::range_skyline_all_pairs(kQuery, objs));
}

SweepSpec small_sweep() {
    SweepSpec spec;
    spec.base = preset("scenario2");
    spec.base.node_count = 40;
    spec.param = "speed_max";
    spec.values = {"2", "8"};
    spec.reps = 4;
    return spec;
}

void BM_Sweep(benchmark::State& st) {
    const auto spec = small_sweep();
    for (auto _ : st) benchmark::DoNotOptimize(sweep(spec));
}

void BM_SweepSerial(benchmark::State& st) {
    const auto spec = small_sweep();
    for (auto _ : st) benchmark::DoNotOptimize(reference::sweep_serial(spec));
}

}  // namespace

BENCHMARK(BM_PointSkyline)->RangeMultiplier(4)->Range(64, 16384)->Complexity();
BENCHMARK(BM_PointSkylineParallel)->RangeMultiplier(4)->Range(64, 16384)->Complexity();
BENCHMARK(BM_AllPairsReference)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
