#include <benchmark/benchmark.h>

#include <vector>

#include "uavplan/clustering.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/radio.hpp"
#include "uavplan/scenario.hpp"

using namespace uavplan;

namespace {

SimConfig medium(int n) {
    SimConfig c;
    c.scenario = with_scenario(c, 2000, n).scenario;
    return c;
}

void BM_SelectUavCount(benchmark::State& st) {
    const SimConfig c = medium(static_cast<int>(st.range(0)));
    const auto nodes = generate_nodes(c, 1);
    std::uint64_t seed = 0;
    for (auto _ : st) benchmark::DoNotOptimize(select_uav_count(nodes, c, seed++).k_star);
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_SelectUavCount)->RangeMultiplier(2)->Range(100, 1600)->Complexity()->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& st) {
    const SimConfig c = medium(static_cast<int>(st.range(0)));
    const auto pts = positions(generate_nodes(c, 1));
    for (auto _ : st) benchmark::DoNotOptimize(kmeans(pts, 10, 3).wcss);
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_KMeans)->RangeMultiplier(2)->Range(100, 1600)->Complexity();

void BM_Crp(benchmark::State& st) {
    const SimConfig c = medium(static_cast<int>(st.range(0)));
    const auto pts = positions(generate_nodes(c, 1));
    const CrpParams p{2.0, 2000.0};
    std::uint64_t seed = 0;
    for (auto _ : st) benchmark::DoNotOptimize(crp_cluster(pts, p, seed++).k);
}
BENCHMARK(BM_Crp)->Arg(100)->Arg(1000);

void BM_HataPathLoss(benchmark::State& st) {
    double d = 100;
    for (auto _ : st) {
        benchmark::DoNotOptimize(hata_path_loss(1500, d, 100, 1.5));
        d = d > 5000 ? 100 : d + 1;
    }
}
BENCHMARK(BM_HataPathLoss);

}  // namespace

BENCHMARK_MAIN();
