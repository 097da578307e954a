#include <benchmark/benchmark.h>

#include <cmath>

#include "phav/phav_sampling.hpp"
#include "phav/raman_model.hpp"
#include "phav/tomography.hpp"

namespace {

using namespace phav;

// 400 bins of width 0.1 around a bright state.
QuadratureHistogram bright_histogram() {
    const auto d = sample_phav(std::sqrt(13.8), 200'000, 1);
    return histogram(d.samples, 0.1, std::pair{-20.0, 20.0});
}

void BM_ProjectorBuild(benchmark::State& state) {
    const auto h = bright_histogram();
    for (auto _ : state) benchmark::DoNotOptimize(ProjectorMatrix(h, 150));
}
BENCHMARK(BM_ProjectorBuild)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
    const auto h = bright_histogram();
    const TomographyConfig cfg{.n_max = 150, .iterations = 100, .early_stop_delta = 0.0};
    const ProjectorMatrix pm(h, 150);
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct(h, cfg, pm));
    state.counters["bins"] = static_cast<double>(h.bins());
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

void BM_ReconstructColdProjector(benchmark::State& state) {
    const auto h = bright_histogram();
    const TomographyConfig cfg{.n_max = 150, .iterations = 100, .early_stop_delta = 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct(h, cfg));
}
BENCHMARK(BM_ReconstructColdProjector)->Unit(benchmark::kMillisecond);

void BM_SamplePhav(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_phav(1.7, n, 3));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePhav)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_SimulateTrace(benchmark::State& state) {
    std::vector<double> d;
    for (int i = 0; i <= 250; ++i) d.push_back(0.01 * i);
    const auto p = RamanParams::from_photons(2.9, 100.0, 6e-7, 1e6);
    const auto st = PhononState::squeezed({-0.2, 0.0}, {2.0, 0.0});
    for (auto _ : state) benchmark::DoNotOptimize(simulate_trace(st, p, {}, d));
}
BENCHMARK(BM_SimulateTrace);

}  // namespace
BENCHMARK_MAIN();
