#include "ognidc/ddi.hpp"

#include <cmath>
#include <utility>

#include "ognidc/errors.hpp"

namespace ognidc {

namespace {

void check_converged(const SolveStats& stats) {
    if (stats.stop_reason == StopReason::kMaxIters && stats.final_rel_residual > 1e-3) {
        throw ConvergenceError("solver hit the iteration cap at relative residual " +
                               std::to_string(stats.final_rel_residual));
    }
}

// Shared inner solve of A^T A v = grad_out for both backward passes.
std::vector<double> adjoint_solve(DdiSolution& sol, const DepthMap& grad_out) {
    if (grad_out.height != sol.depth.height || grad_out.width != sol.depth.width) {
        throw ShapeError("output cotangent does not match the solution dimensions");
    }
    grad_out.check_finite("output cotangent");

    std::span<const double> x0;
    if (!sol.cached_adjoint.empty()) x0 = sol.cached_adjoint;

    const SystemConfig& cfg = sol.config;
    auto op = [&cfg](std::span<const double> in, std::span<double> out) {
        apply_normal(cfg, in, out);
    };
    auto res = solve(op, grad_out.values, x0, sol.stop);
    check_converged(res.stats);
    sol.cached_adjoint = res.x;
    return std::move(res.x);
}

}  // namespace

DdiSolution ddi_forward(const GradientField& g, const SparseObservations& obs,
                        const ConfidenceMap* conf, const DdiContext& ctx) {
    if (g.height != obs.height || g.width != obs.width) {
        throw ShapeError("gradient field and observations disagree on dimensions");
    }
    g.check_finite();
    obs.check_finite();
    if (obs.valid_count() == 0) {
        throw SingularSystemError("no valid observations; the constant mode is unconstrained");
    }

    SystemConfig cfg(g.height, g.width, obs.mask, ctx.alpha, conf);
    std::vector<double> rhs = build_rhs(cfg, g, obs);

    std::span<const double> x0;
    if (ctx.previous != nullptr) {
        if (ctx.previous->cached_primal.size() != rhs.size()) {
            throw ShapeError("warm-start solution does not match the system size");
        }
        x0 = ctx.previous->cached_primal;
    }

    auto op = [&cfg](std::span<const double> in, std::span<double> out) {
        apply_normal(cfg, in, out);
    };
    auto res = solve(op, rhs, x0, ctx.stop);
    check_converged(res.stats);

    DdiSolution sol;
    sol.depth = unflatten(g.height, g.width, res.x);
    sol.config = std::move(cfg);
    sol.stop = ctx.stop;
    sol.forward_stats = res.stats;
    sol.cached_primal = std::move(res.x);
    sol.observed = obs.values;
    return sol;
}

GradientField ddi_backward_gradients(DdiSolution& sol, const DepthMap& grad_out) {
    std::vector<double> v = adjoint_solve(sol, grad_out);
    // d b / d g_bar is the identity on the two gradient blocks, so the
    // cotangent is A v restricted to them.
    ResidualVector r = apply_A(sol.config, v);
    return GradientField(sol.depth.height, sol.depth.width, std::move(r.rx), std::move(r.ry));
}

ConfidenceMap ddi_backward_confidence(DdiSolution& sol, const DepthMap& grad_out) {
    if (!sol.config.has_confidence) {
        throw StateError("solution was produced without a confidence map");
    }
    std::vector<double> v = adjoint_solve(sol, grad_out);

    ConfidenceMap cot(sol.depth.height, sol.depth.width, 0.0);
    const double alpha = sol.config.alpha;
    for (std::size_t p = 0; p < v.size(); ++p) {
        if (sol.config.mask[p]) {
            cot.values[p] = v[p] * alpha * (sol.observed[p] - sol.cached_primal[p]);
        }
    }
    return cot;
}

}  // namespace ognidc
