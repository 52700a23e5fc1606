#include "ognidc/refine.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "ognidc/errors.hpp"
#include "ognidc/random.hpp"

namespace ognidc {

GradientField ZeroRefiner::propose(const GradientField& current, const DepthMap&,
                                   const SparseObservations&) const {
    return GradientField(current.height, current.width);
}

OracleRefiner::OracleRefiner(GradientField target, double damping)
    : target_(std::move(target)), damping_(damping) {
    if (!(damping > 0.0) || damping > 1.0) {
        throw DomainError("oracle damping must lie in (0, 1]");
    }
}

GradientField OracleRefiner::propose(const GradientField& current, const DepthMap&,
                                     const SparseObservations&) const {
    if (current.height != target_.height || current.width != target_.width) {
        throw ShapeError("refiner target does not match the current gradient field");
    }
    GradientField delta(current.height, current.width);
    for (std::size_t i = 0; i < delta.gx.size(); ++i) {
        delta.gx[i] = damping_ * (target_.gx[i] - current.gx[i]);
    }
    for (std::size_t i = 0; i < delta.gy.size(); ++i) {
        delta.gy[i] = damping_ * (target_.gy[i] - current.gy[i]);
    }
    return delta;
}

std::unique_ptr<Refiner> make_refiner(const std::string& name, const GradientField& target) {
    if (name == "zero") return std::make_unique<ZeroRefiner>();
    if (name == "oracle") return std::make_unique<OracleRefiner>(target, 1.0);
    if (name.rfind("damped:", 0) == 0) {
        double factor = 0.0;
        try {
            factor = std::stod(name.substr(7));
        } catch (const std::exception&) {
            throw DomainError("cannot parse damping factor in '" + name + "'");
        }
        return std::make_unique<OracleRefiner>(target, factor);
    }
    throw DomainError("unknown refiner '" + name + "' (expected zero, oracle, damped:<f>)");
}

std::size_t RefinementTrace::total_cg_iterations() const {
    std::size_t total = initial.forward_stats.iterations;
    for (const auto& step : steps) total += step.solution.forward_stats.iterations;
    return total;
}

RefinementTrace run_refinement(const SparseObservations& obs, const ConfidenceMap* conf,
                               const Refiner& refiner, int steps, const DdiContext& ctx,
                               bool warm_start) {
    if (steps < 1) throw DomainError("refinement needs at least one step");

    RefinementTrace trace;
    trace.steps.reserve(static_cast<std::size_t>(steps));

    DdiContext local = ctx;
    if (!warm_start) local.previous = nullptr;

    GradientField g(obs.height, obs.width);  // all-zero start
    trace.initial = ddi_forward(g, obs, conf, local);

    const DdiSolution* prev = &trace.initial;
    for (int t = 1; t <= steps; ++t) {
        GradientField delta = refiner.propose(g, prev->depth, obs);
        if (delta.height != g.height || delta.width != g.width) {
            throw ShapeError("refiner produced an update of the wrong shape");
        }
        for (std::size_t i = 0; i < g.gx.size(); ++i) g.gx[i] += delta.gx[i];
        for (std::size_t i = 0; i < g.gy.size(); ++i) g.gy[i] += delta.gy[i];

        local.previous = warm_start ? prev : nullptr;
        DdiSolution sol = ddi_forward(g, obs, conf, local);
        trace.steps.push_back(RefinementStep{g, std::move(sol)});
        prev = &trace.steps.back().solution;
    }
    return trace;
}

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || gamma > 1.0) throw DomainError("loss decay must lie in (0, 1]");
}

double masked_error_terms(const DepthMap& pred, const DepthMap& gt,
                          std::span<const std::uint8_t> valid, const LossOptions& opts) {
    if (pred.height != gt.height || pred.width != gt.width) {
        throw ShapeError("prediction and ground truth disagree on dimensions");
    }
    double l2 = 0.0, l1 = 0.0;
    std::size_t count = 0;
    for (std::size_t p = 0; p < gt.values.size(); ++p) {
        if (!valid[p]) continue;
        const double e = pred.values[p] - gt.values[p];
        l2 += e * e;
        l1 += std::abs(e);
        ++count;
    }
    double total = l2 + (opts.include_l1 ? l1 : 0.0);
    if (opts.mean_over_valid && count > 0) total /= static_cast<double>(count);
    return total;
}

}  // namespace

double loss_depth(std::span<const DepthPrediction> predictions, const DepthMap& gt,
                  std::span<const std::uint8_t> valid, const LossOptions& opts) {
    check_gamma(opts.gamma);
    if (valid.size() != gt.values.size()) {
        throw ShapeError("validity mask does not match the ground-truth size");
    }
    const auto total_steps = predictions.size();
    double loss = 0.0;
    for (std::size_t t = 0; t < total_steps; ++t) {
        const double weight = std::pow(opts.gamma, static_cast<double>(total_steps - 1 - t));
        loss += weight * (masked_error_terms(predictions[t].full, gt, valid, opts) +
                          masked_error_terms(predictions[t].upsampled, gt, valid, opts));
    }
    return loss;
}

double loss_gradients(std::span<const GradientField> predictions, const GradientField& gt,
                      const LossOptions& opts) {
    check_gamma(opts.gamma);
    const auto total_steps = predictions.size();
    double loss = 0.0;
    for (std::size_t t = 0; t < total_steps; ++t) {
        const GradientField& g = predictions[t];
        if (g.height != gt.height || g.width != gt.width) {
            throw ShapeError("gradient prediction does not match the ground-truth shape");
        }
        double l1 = 0.0;
        for (std::size_t i = 0; i < g.gx.size(); ++i) l1 += std::abs(g.gx[i] - gt.gx[i]);
        for (std::size_t i = 0; i < g.gy.size(); ++i) l1 += std::abs(g.gy[i] - gt.gy[i]);
        if (opts.mean_over_valid && gt.entry_count() > 0) {
            l1 /= static_cast<double>(gt.entry_count());
        }
        loss += std::pow(opts.gamma, static_cast<double>(total_steps - 1 - t)) * l1;
    }
    return loss;
}

double combined_loss(double depth_loss, double gradient_loss, double lambda) {
    return depth_loss + lambda * gradient_loss;
}

namespace {

struct VjpInstance {
    GradientField g;
    SparseObservations obs;
    DepthMap gt;
    std::vector<std::uint8_t> valid;
};

VjpInstance random_instance(std::uint64_t seed, int h, int w) {
    std::mt19937_64 rng(seed);
    VjpInstance inst{GradientField(h, w), SparseObservations(h, w), DepthMap(h, w), {}};
    for (double& v : inst.g.gx) v = uniform_real(rng, -0.5, 0.5);
    for (double& v : inst.g.gy) v = uniform_real(rng, -0.5, 0.5);
    for (double& v : inst.gt.values) v = uniform_real(rng, 1.0, 5.0);
    // Roughly a quarter of the pixels observed, at least one.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (unit_real(rng) < 0.25) inst.obs.set(y, x, uniform_real(rng, 1.0, 5.0));
        }
    }
    if (inst.obs.valid_count() == 0) inst.obs.set(0, 0, uniform_real(rng, 1.0, 5.0));
    inst.valid.assign(inst.gt.values.size(), 1);
    return inst;
}

}  // namespace

double end_to_end_vjp_check(std::uint64_t seed, int height, int width) {
    if (height < 1 || width < 1 || height * width > 64) {
        throw DomainError("derivative check is meant for grids of at most 64 pixels");
    }
    VjpInstance inst = random_instance(seed, height, width);

    // Finite differences need the solver at full precision: floor tolerance
    // and no windowed stall stop, so probe solves cannot exit early.
    DdiContext ctx;
    ctx.stop.rel_tol = 1e-14;
    ctx.stop.stall_window = 1 << 20;

    LossOptions smooth;
    smooth.include_l1 = false;  // keep the composition differentiable

    auto scalar = [&](const GradientField& g) {
        DdiSolution sol = ddi_forward(g, inst.obs, nullptr, ctx);
        const DepthPrediction pred[] = {{sol.depth, sol.depth}};
        return loss_depth(pred, inst.gt, inst.valid, smooth);
    };

    // Analytic cotangent of the squared-error loss: both maps of the pair are
    // the integrator output, so dL/dD = 4 (D - gt) on valid pixels.
    DdiSolution sol = ddi_forward(inst.g, inst.obs, nullptr, ctx);
    DepthMap grad_out(height, width);
    for (std::size_t p = 0; p < grad_out.values.size(); ++p) {
        if (inst.valid[p]) {
            grad_out.values[p] = 4.0 * (sol.depth.values[p] - inst.gt.values[p]);
        }
    }
    GradientField vjp = ddi_backward_gradients(sol, grad_out);

    const double step = 1e-6;
    double max_abs_fd = 0.0;
    std::vector<double> fd(inst.g.entry_count());
    std::size_t k = 0;
    auto fd_entry = [&](double& entry) {
        const double saved = entry;
        entry = saved + step;
        const double plus = scalar(inst.g);
        entry = saved - step;
        const double minus = scalar(inst.g);
        entry = saved;
        fd[k] = (plus - minus) / (2.0 * step);
        max_abs_fd = std::max(max_abs_fd, std::abs(fd[k]));
        ++k;
    };
    for (double& entry : inst.g.gx) fd_entry(entry);
    for (double& entry : inst.g.gy) fd_entry(entry);

    const double floor = std::max(1e-3 * max_abs_fd, 1e-12);
    double max_rel = 0.0;
    k = 0;
    auto compare = [&](double analytic) {
        const double rel = std::abs(analytic - fd[k]) / std::max(std::abs(fd[k]), floor);
        max_rel = std::max(max_rel, rel);
        ++k;
    };
    for (double v : vjp.gx) compare(v);
    for (double v : vjp.gy) compare(v);
    return max_rel;
}

}  // namespace ognidc
