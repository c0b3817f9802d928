#include <benchmark/benchmark.h>

#include "springlink/design_space.hpp"

using namespace springlink;

namespace {

AttachmentSweep slider_sweep(std::size_t n) {
    AttachmentSweep s;
    s.geometry = FourBarGeometry::slider_crank(1.0, 6.0);
    s.l_over_a = {"l_over_a", 0.0, 8.0, n};
    s.beta = {"beta_rad", 0.0, kPi, n};
    s.samples = 720;
    return s;
}

void BM_Sweep(benchmark::State& state, Execution exec) {
    const auto spec = slider_sweep(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto grid = sweep_attachment(spec, exec);
        benchmark::DoNotOptimize(grid.ratio.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_Pipeline(benchmark::State& state) {
    PipelineInput in;
    in.geometry = FourBarGeometry::slider_crank(1.0, 6.0);
    in.attachment = CouplerAttachment::make(6.0, kPi / 2.0);
    in.samples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(design_pipeline(in).torque.ratio);
}

}  // namespace

BENCHMARK_CAPTURE(BM_Sweep, serial, Execution::Serial)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, parallel, Execution::Parallel)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Pipeline)->Arg(720)->Arg(3600)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
