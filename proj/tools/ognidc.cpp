// Command line surface for the depth-integration engine: scene synthesis,
// observation sampling, gradient export, integration, refinement runs,
// derivative checking, warm-start benchmarking, and metric evaluation.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "ognidc/ddi.hpp"
#include "ognidc/errors.hpp"
#include "ognidc/eval.hpp"
#include "ognidc/grid.hpp"
#include "ognidc/random.hpp"
#include "ognidc/refine.hpp"
#include "ognidc/tensor_io.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using namespace ognidc;
using ognidc::tool::RunReport;
using ognidc::tool::stats_to_json;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kSingular = 3;
constexpr int kConvergence = 4;

struct SolveFlags {
    double alpha = 5.0;
    double tol = 1e-5;
    std::size_t max_iters = 0;

    DdiContext context() const {
        DdiContext ctx;
        ctx.alpha = alpha;
        ctx.stop.rel_tol = tol;
        ctx.stop.max_iters = max_iters;
        return ctx;
    }
};

void add_solve_flags(CLI::App* cmd, SolveFlags& flags) {
    cmd->add_option("--alpha", flags.alpha, "Observation weight")->capture_default_str();
    cmd->add_option("--tol", flags.tol, "Relative residual tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iters", flags.max_iters,
                    "Iteration cap (0 derives 20*pixels)");
}

struct SynthOpts {
    int height = 64;
    int width = 64;
    std::uint64_t seed = 0;
    int planes = 1;
    int caps = 2;
    int steps = 2;
    double max_tilt = 2.0;
    double min_depth = 1.0;
    double max_depth = 10.0;
    std::string out;
};

int run_synth(const SynthOpts& o) {
    SceneSpec spec;
    spec.height = o.height;
    spec.width = o.width;
    spec.seed = o.seed;
    spec.planes = o.planes;
    spec.caps = o.caps;
    spec.steps = o.steps;
    spec.max_tilt_m = o.max_tilt;
    spec.range = DepthRange{o.min_depth, o.max_depth};

    RunReport report("synth");
    report.param("height", o.height);
    report.param("width", o.width);
    report.param("seed", o.seed);
    report.param("planes", o.planes);
    report.param("caps", o.caps);
    report.param("steps", o.steps);

    DepthMap scene = synth_scene(spec);
    write_depth_file(o.out, scene);
    report.field("output", json{{"path", o.out}, {"digest", tool::file_digest(o.out)}});
    report.emit();
    return kOk;
}

struct SampleOpts {
    std::string gt;
    std::size_t points = 500;
    std::uint64_t seed = 0;
    int keep_every = 1;
    std::string out;
};

int run_sample(const SampleOpts& o) {
    RunReport report("sample");
    report.input("gt", o.gt);
    report.param("points", o.points);
    report.param("seed", o.seed);
    report.param("keep_every", o.keep_every);

    DepthMap gt = read_depth_file(o.gt);
    SparseObservations obs = sample_random_points(gt, o.points, o.seed);
    if (o.keep_every > 1) obs = subsample_rows(obs, o.keep_every);
    write_observations_csv(o.out, obs);
    report.field("valid_count", json(obs.valid_count()));
    report.field("output", json{{"path", o.out}, {"digest", tool::file_digest(o.out)}});
    report.emit();
    return kOk;
}

struct GradOpts {
    std::string depth;
    std::string out;
};

int run_grad(const GradOpts& o) {
    RunReport report("grad");
    report.input("depth", o.depth);
    DepthMap depth = read_depth_file(o.depth);
    write_gradient_file(o.out, finite_difference(depth));
    report.field("output", json{{"path", o.out}, {"digest", tool::file_digest(o.out)}});
    report.emit();
    return kOk;
}

struct PoolOpts {
    std::string obs;
    int height = 0;
    int width = 0;
    int factor = 4;
    std::string out;
};

int run_pool(const PoolOpts& o) {
    RunReport report("pool");
    report.input("obs", o.obs);
    report.param("factor", o.factor);

    SparseObservations obs = read_observations_csv(o.obs, o.height, o.width);
    // Partial windows are ambiguous; drop the bottom/right remainder first.
    SparseObservations cropped = crop_to_multiple(obs, o.factor);
    SparseObservations pooled = masked_avg_pool(cropped, o.factor);
    write_observations_csv(o.out, pooled);
    report.field("pooled_height", json(pooled.height));
    report.field("pooled_width", json(pooled.width));
    report.field("valid_count", json(pooled.valid_count()));
    report.field("output", json{{"path", o.out}, {"digest", tool::file_digest(o.out)}});
    report.emit();
    return kOk;
}

struct IntegrateOpts {
    std::string gradients;
    std::string obs;
    std::string confidence;
    SolveFlags solve;
    std::string out;
    std::string report_path;
};

int run_integrate(const IntegrateOpts& o) {
    RunReport report("integrate");
    report.input("gradients", o.gradients);
    report.input("obs", o.obs);
    report.param("alpha", o.solve.alpha);
    report.param("tol", o.solve.tol);

    GradientField g = read_gradient_file(o.gradients);
    SparseObservations obs = read_observations_csv(o.obs, g.height, g.width);
    ConfidenceMap conf;
    const ConfidenceMap* conf_ptr = nullptr;
    if (!o.confidence.empty()) {
        report.input("confidence", o.confidence);
        conf = confidence_from_tensor(read_dten_file(o.confidence));
        conf_ptr = &conf;
    }

    DdiSolution sol = ddi_forward(g, obs, conf_ptr, o.solve.context());
    write_depth_file(o.out, sol.depth);
    report.field("solve", stats_to_json(sol.forward_stats));
    report.field("output", json{{"path", o.out}, {"digest", tool::file_digest(o.out)}});
    report.emit(o.report_path.empty() ? fs::path{} : fs::path(o.report_path));
    return kOk;
}

struct CompleteOpts {
    std::string gt;
    std::string obs;
    std::string confidence;
    std::string refiner = "zero";
    int iters = 5;
    SolveFlags solve;
    std::string out;
};

int run_complete(const CompleteOpts& o) {
    RunReport report("complete");
    report.input("gt", o.gt);
    report.input("obs", o.obs);
    report.param("refiner", o.refiner);
    report.param("iters", o.iters);
    report.param("alpha", o.solve.alpha);
    report.param("tol", o.solve.tol);

    DepthMap gt = read_depth_file(o.gt);
    SparseObservations obs = read_observations_csv(o.obs, gt.height, gt.width);
    ConfidenceMap conf;
    const ConfidenceMap* conf_ptr = nullptr;
    if (!o.confidence.empty()) {
        report.input("confidence", o.confidence);
        conf = confidence_from_tensor(read_dten_file(o.confidence));
        conf_ptr = &conf;
    }

    GradientField target = finite_difference(gt);
    auto refiner = make_refiner(o.refiner, target);
    RefinementTrace trace =
        run_refinement(obs, conf_ptr, *refiner, o.iters, o.solve.context());

    const std::vector<std::uint8_t> valid = positivity_mask(gt);
    json steps = json::array();
    int index = 0;
    for (const auto& step : trace.steps) {
        MetricReport metrics = compute_metrics(step.solution.depth, gt, valid);
        steps.push_back(json{{"step", ++index},
                             {"rmse_m", metrics.rmse_m},
                             {"mae_m", metrics.mae_m},
                             {"rel", metrics.rel},
                             {"irmse_per_km", metrics.irmse_per_km},
                             {"imae_per_km", metrics.imae_per_km},
                             {"valid_count", metrics.valid_count},
                             {"solve", stats_to_json(step.solution.forward_stats)}});
    }
    report.field("initial_solve", stats_to_json(trace.initial.forward_stats));
    report.field("steps", std::move(steps));
    report.field("total_cg_iterations", json(trace.total_cg_iterations()));
    report.emit(o.out.empty() ? fs::path{} : fs::path(o.out));
    return kOk;
}

struct GradcheckOpts {
    int height = 6;
    int width = 8;
    std::uint64_t seed = 0;
    double threshold = 1e-4;
    double alpha = 5.0;
};

// Relative error with a floor tied to the largest reference entry, so
// near-zero entries compare against the gradient's scale.
double max_rel_error(std::span<const double> got, std::span<const double> want) {
    double floor = 0.0;
    for (double v : want) floor = std::max(floor, std::abs(v));
    floor = std::max(1e-3 * floor, 1e-12);
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        worst = std::max(worst,
                         std::abs(got[i] - want[i]) / std::max(std::abs(want[i]), floor));
    }
    return worst;
}

int run_gradcheck(const GradcheckOpts& o) {
    RunReport report("gradcheck");
    report.param("height", o.height);
    report.param("width", o.width);
    report.param("seed", o.seed);
    report.param("threshold", o.threshold);

    std::mt19937_64 rng(o.seed);
    GradientField g(o.height, o.width);
    for (double& v : g.gx) v = uniform_real(rng, -0.5, 0.5);
    for (double& v : g.gy) v = uniform_real(rng, -0.5, 0.5);
    SparseObservations obs(o.height, o.width);
    for (int y = 0; y < o.height; ++y) {
        for (int x = 0; x < o.width; ++x) {
            if (unit_real(rng) < 0.3) obs.set(y, x, uniform_real(rng, 1.0, 5.0));
        }
    }
    if (obs.valid_count() == 0) obs.set(0, 0, uniform_real(rng, 1.0, 5.0));
    ConfidenceMap conf(o.height, o.width);
    for (double& v : conf.values) v = uniform_real(rng, 0.2, 0.9);
    DepthMap cotangent(o.height, o.width);
    for (double& v : cotangent.values) v = uniform_real(rng, -1.0, 1.0);

    // The checked backward pass solves at 1e-12. The finite-difference
    // probes solve at the rounding floor with the stall stop disabled, since
    // dividing by the step magnifies any solver error in the reference.
    DdiContext ctx;
    ctx.alpha = o.alpha;
    ctx.stop.rel_tol = 1e-12;
    ctx.stop.stall_window = 1 << 20;
    DdiContext probe_ctx = ctx;
    probe_ctx.stop.rel_tol = 1e-14;
    const double step = 1e-6;

    auto probe = [&](const GradientField& gg, const ConfidenceMap* cc) {
        DdiSolution sol = ddi_forward(gg, obs, cc, probe_ctx);
        double s = 0.0;
        for (std::size_t p = 0; p < cotangent.values.size(); ++p) {
            s += cotangent.values[p] * sol.depth.values[p];
        }
        return s;
    };

    // Gradient-field cotangent against central differences.
    DdiSolution sol = ddi_forward(g, obs, &conf, ctx);
    GradientField analytic = ddi_backward_gradients(sol, cotangent);
    GradientField fd(o.height, o.width);
    GradientField probe_g = g;
    auto fd_entry = [&](double& entry, double& slot) {
        const double saved = entry;
        entry = saved + step;
        const double plus = probe(probe_g, &conf);
        entry = saved - step;
        const double minus = probe(probe_g, &conf);
        entry = saved;
        slot = (plus - minus) / (2.0 * step);
    };
    for (std::size_t i = 0; i < probe_g.gx.size(); ++i) fd_entry(probe_g.gx[i], fd.gx[i]);
    for (std::size_t i = 0; i < probe_g.gy.size(); ++i) fd_entry(probe_g.gy[i], fd.gy[i]);
    const double err_gx = max_rel_error(analytic.gx, fd.gx);
    const double err_gy = max_rel_error(analytic.gy, fd.gy);
    const double err_gradients = std::max(err_gx, err_gy);

    // Confidence cotangent against central differences.
    ConfidenceMap conf_analytic = ddi_backward_confidence(sol, cotangent);
    std::vector<double> conf_fd(conf.values.size(), 0.0);
    ConfidenceMap probe_c = conf;
    for (std::size_t k = 0; k < conf.values.size(); ++k) {
        const double saved = probe_c.values[k];
        probe_c.values[k] = saved + step;
        const double plus = probe(g, &probe_c);
        probe_c.values[k] = saved - step;
        const double minus = probe(g, &probe_c);
        probe_c.values[k] = saved;
        conf_fd[k] = (plus - minus) / (2.0 * step);
    }
    const double err_confidence = max_rel_error(conf_analytic.values, conf_fd);

    const bool pass = err_gradients < o.threshold && err_confidence < o.threshold;
    report.field("max_rel_error_gradients", json(err_gradients));
    report.field("max_rel_error_confidence", json(err_confidence));
    report.field("pass", json(pass));
    report.emit();
    return pass ? kOk : kCheckFailed;
}

struct BenchOpts {
    int height = 128;
    int width = 128;
    std::size_t points = 500;
    std::uint64_t seed = 0;
    int iters = 5;
    std::string refiner = "damped:0.3";
    SolveFlags solve;
};

int run_bench(const BenchOpts& o) {
    RunReport report("bench");
    report.param("height", o.height);
    report.param("width", o.width);
    report.param("points", o.points);
    report.param("seed", o.seed);
    report.param("iters", o.iters);
    report.param("refiner", o.refiner);

    SceneSpec spec;
    spec.height = o.height;
    spec.width = o.width;
    spec.seed = o.seed;
    DepthMap gt = synth_scene(spec);
    SparseObservations obs = sample_random_points(gt, o.points, o.seed + 1);
    GradientField target = finite_difference(gt);
    auto refiner = make_refiner(o.refiner, target);
    const DdiContext ctx = o.solve.context();

    using clock = std::chrono::steady_clock;
    auto timed = [&](bool warm) {
        const auto t0 = clock::now();
        RefinementTrace trace = run_refinement(obs, nullptr, *refiner, o.iters, ctx, warm);
        const double ms =
            std::chrono::duration_cast<std::chrono::microseconds>(clock::now() - t0)
                .count() /
            1000.0;
        json per_step = json::array();
        per_step.push_back(trace.initial.forward_stats.iterations);
        for (const auto& step : trace.steps) {
            per_step.push_back(step.solution.forward_stats.iterations);
        }
        return std::tuple<std::size_t, double, json>(trace.total_cg_iterations(), ms,
                                                     std::move(per_step));
    };

    auto [cold_total, cold_ms, cold_steps] = timed(false);
    auto [warm_total, warm_ms, warm_steps] = timed(true);

    report.field("warm_total_cg_iters", json(warm_total));
    report.field("cold_total_cg_iters", json(cold_total));
    report.field("warm_per_step_cg_iters", std::move(warm_steps));
    report.field("cold_per_step_cg_iters", std::move(cold_steps));
    report.field("warm_ms", json(warm_ms));
    report.field("cold_ms", json(cold_ms));
    report.field("iteration_ratio",
                 json(cold_total == 0
                          ? 1.0
                          : static_cast<double>(warm_total) / static_cast<double>(cold_total)));
    report.emit();
    return kOk;
}

struct EvalOpts {
    std::string pred;
    std::string gt;
    std::string mask;
    std::string out;
};

int run_eval(const EvalOpts& o) {
    RunReport report("eval");
    report.input("pred", o.pred);
    report.input("gt", o.gt);

    DepthMap pred = read_depth_file(o.pred);
    DepthMap gt = read_depth_file(o.gt);
    std::vector<std::uint8_t> valid;
    if (!o.mask.empty()) {
        report.input("mask", o.mask);
        DepthMap mask_map = read_depth_file(o.mask);
        if (mask_map.height != gt.height || mask_map.width != gt.width) {
            throw ShapeError("mask dimensions do not match the ground truth");
        }
        valid.resize(mask_map.values.size());
        for (std::size_t p = 0; p < valid.size(); ++p) {
            valid[p] = mask_map.values[p] != 0.0 ? 1 : 0;
        }
    } else {
        valid = positivity_mask(gt);
    }

    MetricReport metrics = compute_metrics(pred, gt, valid);
    report.field("metrics", json::parse(metrics.to_json()));
    report.emit();
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw IoError("cannot open for writing: " + o.out);
        f << metrics.to_json() << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-domain depth integration toolkit"};
    app.require_subcommand(1);

    SynthOpts synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic depth scene");
    synth_cmd->add_option("--height", synth.height)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--width", synth.width)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth.seed);
    synth_cmd->add_option("--planes", synth.planes)->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--caps", synth.caps)->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--steps", synth.steps)->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--max-tilt", synth.max_tilt);
    synth_cmd->add_option("--min-depth", synth.min_depth);
    synth_cmd->add_option("--max-depth", synth.max_depth);
    synth_cmd->add_option("--out", synth.out)->required();

    SampleOpts sample;
    auto* sample_cmd =
        app.add_subcommand("sample", "Sample sparse observations from a depth map");
    sample_cmd->add_option("--gt", sample.gt)->required();
    sample_cmd->add_option("--points", sample.points);
    sample_cmd->add_option("--seed", sample.seed);
    sample_cmd->add_option("--keep-every", sample.keep_every)->check(CLI::PositiveNumber);
    sample_cmd->add_option("--out", sample.out)->required();

    GradOpts grad;
    auto* grad_cmd =
        app.add_subcommand("grad", "Export finite-difference gradients of a depth map");
    grad_cmd->add_option("--depth", grad.depth)->required();
    grad_cmd->add_option("--out", grad.out)->required();

    PoolOpts pool;
    auto* pool_cmd =
        app.add_subcommand("pool", "Masked average-pooling of sparse observations");
    pool_cmd->add_option("--obs", pool.obs)->required();
    pool_cmd->add_option("--height", pool.height)->required()->check(CLI::PositiveNumber);
    pool_cmd->add_option("--width", pool.width)->required()->check(CLI::PositiveNumber);
    pool_cmd->add_option("--factor", pool.factor)->check(CLI::PositiveNumber);
    pool_cmd->add_option("--out", pool.out)->required();

    IntegrateOpts integrate;
    auto* integrate_cmd =
        app.add_subcommand("integrate", "Integrate a gradient field into a depth map");
    integrate_cmd->add_option("--gradients", integrate.gradients)->required();
    integrate_cmd->add_option("--obs", integrate.obs)->required();
    integrate_cmd->add_option("--confidence", integrate.confidence);
    add_solve_flags(integrate_cmd, integrate.solve);
    integrate_cmd->add_option("--out", integrate.out)->required();
    integrate_cmd->add_option("--report", integrate.report_path);

    CompleteOpts complete;
    auto* complete_cmd =
        app.add_subcommand("complete", "Run the iterate-integrate refinement loop");
    complete_cmd->add_option("--gt", complete.gt)->required();
    complete_cmd->add_option("--obs", complete.obs)->required();
    complete_cmd->add_option("--confidence", complete.confidence);
    complete_cmd->add_option("--refiner", complete.refiner)->capture_default_str();
    complete_cmd->add_option("--iters", complete.iters)->check(CLI::PositiveNumber);
    add_solve_flags(complete_cmd, complete.solve);
    complete_cmd->add_option("--out", complete.out);

    GradcheckOpts gradcheck;
    auto* gradcheck_cmd =
        app.add_subcommand("gradcheck", "Check backward passes against finite differences");
    gradcheck_cmd->add_option("--height", gradcheck.height)->check(CLI::PositiveNumber);
    gradcheck_cmd->add_option("--width", gradcheck.width)->check(CLI::PositiveNumber);
    gradcheck_cmd->add_option("--seed", gradcheck.seed);
    gradcheck_cmd->add_option("--threshold", gradcheck.threshold);
    gradcheck_cmd->add_option("--alpha", gradcheck.alpha);

    BenchOpts bench;
    auto* bench_cmd =
        app.add_subcommand("bench", "Compare warm- and cold-started refinement runs");
    bench_cmd->add_option("--height", bench.height)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--width", bench.width)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--points", bench.points);
    bench_cmd->add_option("--seed", bench.seed);
    bench_cmd->add_option("--iters", bench.iters)->check(CLI::Range(2, 1000));
    bench_cmd->add_option("--refiner", bench.refiner)->capture_default_str();
    add_solve_flags(bench_cmd, bench.solve);

    EvalOpts eval;
    auto* eval_cmd = app.add_subcommand("eval", "Metrics between prediction and ground truth");
    eval_cmd->add_option("--pred", eval.pred)->required();
    eval_cmd->add_option("--gt", eval.gt)->required();
    eval_cmd->add_option("--mask", eval.mask);
    eval_cmd->add_option("--out", eval.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }

    try {
        if (synth_cmd->parsed()) return run_synth(synth);
        if (sample_cmd->parsed()) return run_sample(sample);
        if (grad_cmd->parsed()) return run_grad(grad);
        if (pool_cmd->parsed()) return run_pool(pool);
        if (integrate_cmd->parsed()) return run_integrate(integrate);
        if (complete_cmd->parsed()) return run_complete(complete);
        if (gradcheck_cmd->parsed()) return run_gradcheck(gradcheck);
        if (bench_cmd->parsed()) return run_bench(bench);
        if (eval_cmd->parsed()) return run_eval(eval);
    } catch (const SingularSystemError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSingular;
    } catch (const EmptyMaskError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSingular;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConvergence;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
