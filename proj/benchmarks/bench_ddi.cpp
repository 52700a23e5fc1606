#include <benchmark/benchmark.h>

#include <random>

#include "ognidc/ddi.hpp"
#include "ognidc/eval.hpp"
#include "ognidc/random.hpp"
#include "ognidc/refine.hpp"

using namespace ognidc;

namespace {

struct Instance {
    GradientField g;
    SparseObservations obs;
    SystemConfig cfg;
};

Instance make_instance(int n) {
    SceneSpec spec;
    spec.height = n;
    spec.width = n;
    spec.seed = 1;
    DepthMap gt = synth_scene(spec);
    SparseObservations obs = sample_random_points(gt, static_cast<std::size_t>(n) * 4, 2);
    return Instance{finite_difference(gt), obs, SystemConfig(n, n, obs.mask, 5.0)};
}

}  // namespace

static void BM_ApplyNormal(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Instance inst = make_instance(n);
    std::mt19937_64 rng(3);
    std::vector<double> in(inst.cfg.pixel_count()), out(inst.cfg.pixel_count());
    for (double& v : in) v = uniform_real(rng, -1.0, 1.0);
    for (auto _ : state) {
        apply_normal(inst.cfg, in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}
BENCHMARK(BM_ApplyNormal)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

static void BM_DdiForward(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Instance inst = make_instance(n);
    DdiContext ctx;
    std::size_t iters = 0;
    for (auto _ : state) {
        DdiSolution sol = ddi_forward(inst.g, inst.obs, nullptr, ctx);
        iters += sol.forward_stats.iterations;
        benchmark::DoNotOptimize(sol.depth.values.data());
    }
    state.counters["cg_iters"] =
        benchmark::Counter(static_cast<double>(iters), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_DdiForward)->Arg(32)->Arg(64)->Arg(128);

static void BM_RefinementTrace(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const bool warm = state.range(1) != 0;
    SceneSpec spec;
    spec.height = n;
    spec.width = n;
    spec.seed = 1;
    DepthMap gt = synth_scene(spec);
    SparseObservations obs = sample_random_points(gt, static_cast<std::size_t>(n) * 4, 2);
    OracleRefiner refiner(finite_difference(gt), 0.3);
    DdiContext ctx;
    std::size_t iters = 0;
    for (auto _ : state) {
        RefinementTrace trace = run_refinement(obs, nullptr, refiner, 5, ctx, warm);
        iters += trace.total_cg_iterations();
        benchmark::DoNotOptimize(trace.steps.back().solution.depth.values.data());
    }
    state.counters["cg_iters"] =
        benchmark::Counter(static_cast<double>(iters), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_RefinementTrace)
    ->Args({64, 0})
    ->Args({64, 1})
    ->Args({128, 0})
    ->Args({128, 1});

static void BM_BackwardGradients(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Instance inst = make_instance(n);
    DdiContext ctx;
    DdiSolution sol = ddi_forward(inst.g, inst.obs, nullptr, ctx);
    std::mt19937_64 rng(4);
    DepthMap grad_out(n, n);
    for (double& v : grad_out.values) v = uniform_real(rng, -1.0, 1.0);
    for (auto _ : state) {
        state.PauseTiming();
        sol.cached_adjoint.clear();  // measure the cold backward solve
        state.ResumeTiming();
        GradientField cot = ddi_backward_gradients(sol, grad_out);
        benchmark::DoNotOptimize(cot.gx.data());
    }
}
BENCHMARK(BM_BackwardGradients)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
