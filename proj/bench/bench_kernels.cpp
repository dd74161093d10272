// Parallel kernels against their serial reference twins. The pairs are
// bit-identical by contract (the test suite asserts it); this target
// reports what the OpenMP versions actually buy on this machine.

#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "seamweld/flow.hpp"
#include "seamweld/lpam.hpp"
#include "seamweld/quality.hpp"
#include "seamweld/reference.hpp"

using namespace seamweld;

namespace {

Image gray_texture(int w, int h, uint32_t seed) {
    return luminance(fixtures::smooth_texture(w, h, seed));
}

std::pair<Image, Image> shifted_crops(int w, int h, int dx, int dy, uint32_t seed) {
    Image big = fixtures::smooth_texture(w + 2 * 8, h + 2 * 8, seed);
    return {crop(big, Rect{8, 8, 8 + w, 8 + h}),
            crop(big, Rect{8 + dx, 8 + dy, 8 + dx + w, 8 + dy + h})};
}

void bm_descriptors_parallel(benchmark::State& state) {
    Image gray = gray_texture(int(state.range(0)), int(state.range(0)), 17);
    for (auto _ : state) benchmark::DoNotOptimize(dense_descriptors(gray));
}

void bm_descriptors_serial(benchmark::State& state) {
    Image gray = gray_texture(int(state.range(0)), int(state.range(0)), 17);
    for (auto _ : state) benchmark::DoNotOptimize(reference::dense_descriptors(gray));
}

void bm_flow_parallel(benchmark::State& state) {
    auto [target, ref] = shifted_crops(int(state.range(0)), int(state.range(0)), 3, -2, 29);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_flow(target, ref));
}

void bm_flow_serial(benchmark::State& state) {
    auto [target, ref] = shifted_crops(int(state.range(0)), int(state.range(0)), 3, -2, 29);
    for (auto _ : state) benchmark::DoNotOptimize(reference::estimate_flow(target, ref));
}

StitchState scored_state() {
    fixtures::ShiftSpec spec;
    spec.target_end = 230;
    spec.ref_begin = 170;
    spec.block = Rect{170, 120, 230, 180};
    spec.noise = 0.02;
    spec.cycles = 10.0;
    spec.seed = 5;
    return init_stitch(fixtures::shifted_pair(spec));
}

void bm_score_parallel(benchmark::State& state) {
    StitchState st = scored_state();
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_seam(st.pair, st.seam, st.overlap));
}

void bm_score_serial(benchmark::State& state) {
    StitchState st = scored_state();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::evaluate_seam(st.pair, st.seam, st.overlap));
}

BENCHMARK(bm_descriptors_parallel)->Arg(102)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_descriptors_serial)->Arg(102)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_flow_parallel)->Arg(64)->Arg(102)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_flow_serial)->Arg(64)->Arg(102)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_score_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_score_serial)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
