#include <benchmark/benchmark.h>

#include "burstacc/accumulate.hpp"
#include "burstacc/fft.hpp"
#include "burstacc/registration.hpp"
#include "burstacc/synth.hpp"

using namespace burstacc;

namespace {

FrameSequence bench_burst(int size, int frames) {
    DegradationSpec spec;
    spec.warp_amplitude = 2.0;
    spec.warp_smoothness = 12.0;
    spec.kernels = {gaussian_kernel(0.7)};
    spec.noise_sigma = 0.005;
    spec.seed = 7;
    return generate_burst(make_bar_chart(size, size), frames, spec).frames;
}

void BM_fft2(benchmark::State& state) {
    const int n = int(state.range(0));
    const ImageGrid img = make_bar_chart(n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fft2(img));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_fft2)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_framelet_analyze(benchmark::State& state) {
    const FilterBank bank = build_framelet_bank();
    const ImageGrid img = make_bar_chart(128, 128);
    const int levels = int(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze(img, bank, levels));
    }
}
BENCHMARK(BM_framelet_analyze)->Arg(1)->Arg(2)->Arg(4);

void BM_lk_flow(benchmark::State& state) {
    const ImageGrid a = make_smooth_texture(128, 128, 1);
    const ImageGrid b = make_smooth_texture(128, 128, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lk_flow(a, b));
    }
}
BENCHMARK(BM_lk_flow);

void BM_method(benchmark::State& state, Method method) {
    const FrameSequence burst = bench_burst(128, 16);
    BurstConfig config;
    config.method = method;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_method(burst, config));
    }
}
BENCHMARK_CAPTURE(BM_method, fba, Method::Fba);
BENCHMARK_CAPTURE(BM_method, fr_wwba, Method::FrWwba);
BENCHMARK_CAPTURE(BM_method, fr_wwfba, Method::FrWwfba);
BENCHMARK_CAPTURE(BM_method, sfba, Method::Sfba);
BENCHMARK_CAPTURE(BM_method, fr_swba, Method::FrSwba);

}  // namespace

BENCHMARK_MAIN();
