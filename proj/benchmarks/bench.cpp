#include <benchmark/benchmark.h>

#include <vector>

#include "rebel/analysis.hpp"
#include "rebel/engine.hpp"
#include "rebel/exact.hpp"

using namespace rebel;

namespace {

SimState seeded_state(int n, int particles, std::uint64_t seed) {
    std::vector<std::uint8_t> bits(n, 0);
    for (int i = 0; i < particles; ++i) bits[std::int64_t(i) * n / particles] = 1;
    return SimState(RingConfig::from_bits(bits), seed);
}

void bm_step_one_sided(benchmark::State& state) {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 0.3);
    SimState st = seeded_state(4096, 1001, 7);
    for (auto _ : state) {
        if (st.particles() == 0) st = seeded_state(4096, 1001, 7);
        benchmark::DoNotOptimize(step(st, spec, 0.3));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_step_one_sided);

void bm_step_two_sided(benchmark::State& state) {
    ModelSpec spec = make_spec(Family::TwoSidedRV, Representation::Interface, 0.4);
    SimState st = seeded_state(4096, 1001, 7);
    for (auto _ : state) {
        if (st.particles() == 0) st = seeded_state(4096, 1001, 7);
        benchmark::DoNotOptimize(step(st, spec, 0.4));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_step_two_sided);

void bm_sweep_with_patterns(benchmark::State& state) {
    SweepPlan p;
    p.spec = make_spec(Family::OneSidedRV, Representation::MirrorDual, 0.5);
    p.n_sites = 1024;
    p.total_time = 1e3;
    p.bins = 8;
    p.alpha_begin = p.alpha_end = 0.3;
    p.initial = InitialState::ProductHalf;
    p.patterns = {Pattern::parse("11"), Pattern::parse("101"), Pattern::parse("1101")};
    for (auto _ : state) {
        p.seed++;
        benchmark::DoNotOptimize(run_sweep(p));
    }
}
BENCHMARK(bm_sweep_with_patterns)->Unit(benchmark::kMillisecond);

void bm_exact_build(benchmark::State& state) {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 0.5);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_generator(spec, n, Sector::Odd));
}
BENCHMARK(bm_exact_build)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void bm_savgol(benchmark::State& state) {
    std::vector<double> y(4096);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.001 * i * i;
    for (auto _ : state) benchmark::DoNotOptimize(savgol_derivative(y, 0.01));
}
BENCHMARK(bm_savgol)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
