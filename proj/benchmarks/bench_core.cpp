#include <benchmark/benchmark.h>

#include <random>

#include "greenprior/indicators.hpp"
#include "greenprior/interp.hpp"
#include "greenprior/roofs.hpp"
#include "greenprior/synth.hpp"

using namespace greenprior;

namespace {

RasterGrid random_mask(std::int64_t n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution green(density);
    RasterGrid g(0.0, 0.0, 5.0, n, n);
    for (auto& v : g.values()) v = green(rng) ? 1.0 : 0.0;
    return g;
}

SampleSet random_samples(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(0.0, 5000.0);
    std::normal_distribution<double> val(20.0, 3.0);
    std::vector<StationSample> s;
    for (std::size_t i = 0; i < n; ++i) s.push_back({pos(rng), pos(rng), val(rng)});
    return SampleSet(s);
}

} // namespace

// One coverage query at the default 500 m radius: one prefix-sum lookup per
// disk row, so the cost scales with radius / cell, not with the mask size.
static void CoverageQuery(benchmark::State& state) {
    const GreenspaceMask mask(random_mask(state.range(0), 0.3, 1));
    std::mt19937_64 rng(2);
    const double extent = 5.0 * static_cast<double>(state.range(0));
    std::uniform_real_distribution<double> pos(0.0, extent);
    for (auto _ : state) benchmark::DoNotOptimize(greenspace_coverage(mask, pos(rng), pos(rng)));
}
BENCHMARK(CoverageQuery)->Arg(200)->Arg(1000)->Arg(4000);

static void CoverageMaskBuild(benchmark::State& state) {
    const auto grid = random_mask(state.range(0), 0.3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(GreenspaceMask(grid));
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(CoverageMaskBuild)->RangeMultiplier(2)->Range(256, 2048)->Complexity(benchmark::oN);

static void ConnectedComponents(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::bernoulli_distribution occupied(0.55);
    std::vector<RoofCell> cells;
    for (std::int64_t r = 0; r < state.range(0); ++r)
        for (std::int64_t c = 0; c < state.range(0); ++c)
            if (occupied(rng)) cells.push_back({r, c, 0.0});
    const RoofCellSet set(GridFrame{}, cells);
    for (auto _ : state) benchmark::DoNotOptimize(label_components(set));
    state.SetComplexityN(static_cast<std::int64_t>(cells.size()));
}
BENCHMARK(ConnectedComponents)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oN);

static void RegionGrowingGable(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const double pitch = 0.4;
    std::vector<RoofCell> cells;
    for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t c = 0; c < n; ++c) {
            const double y = static_cast<double>(r) + 0.5;
            cells.push_back({r, c, 20.0 - pitch * std::abs(y - 0.5 * static_cast<double>(n))});
        }
    const GridFrame frame{};
    const RoofCellSet set(frame, cells);
    const CellCluster cluster(set.cells().begin(), set.cells().end());
    for (auto _ : state) benchmark::DoNotOptimize(grow_segments(cluster, frame));
    state.SetComplexityN(n * n);
}
BENCHMARK(RegionGrowingGable)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oN);

static void KrigingPredict(benchmark::State& state) {
    const auto samples = random_samples(static_cast<std::size_t>(state.range(0)), 4);
    const auto model = fit_model_for(samples, VariogramKind::spherical);
    const auto k = static_cast<std::size_t>(state.range(1));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(0.0, 5000.0);
    for (auto _ : state) benchmark::DoNotOptimize(kriging_predict(samples, model, pos(rng), pos(rng), k));
}
BENCHMARK(KrigingPredict)->Args({200, 16})->Args({200, 64})->Args({2000, 16});

static void IdwPredict(benchmark::State& state) {
    const auto samples = random_samples(static_cast<std::size_t>(state.range(0)), 6);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(0.0, 5000.0);
    for (auto _ : state) benchmark::DoNotOptimize(idw_predict(samples, pos(rng), pos(rng)));
}
BENCHMARK(IdwPredict)->Arg(200)->Arg(2000);

static void ExtractSyntheticCity(benchmark::State& state) {
    SyntheticCitySpec spec;
    spec.buildings = static_cast<std::size_t>(state.range(0));
    const auto city = generate_city(spec);
    for (auto _ : state) benchmark::DoNotOptimize(extract_roofs(city.points, city.buildings));
    state.counters["points"] = static_cast<double>(city.points.size());
}
BENCHMARK(ExtractSyntheticCity)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
