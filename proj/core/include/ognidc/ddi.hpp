#pragma once

#include <vector>

#include "ognidc/cg.hpp"
#include "ognidc/grid.hpp"
#include "ognidc/operators.hpp"

namespace ognidc {

// Result of one depth integration, carrying everything the backward passes
// and the next warm start need.
struct DdiSolution {
    DepthMap depth;
    SystemConfig config;
    StopConfig stop;
    SolveStats forward_stats;
    // flatten(depth); the initial guess for the next forward round.
    std::vector<double> cached_primal;
    // (A^T A)^{-1} grad_out from the most recent backward call; empty until a
    // backward pass runs. Warm-starts the next backward solve.
    std::vector<double> cached_adjoint;
    // Observation values, kept for the confidence backward term.
    std::vector<double> observed;
};

struct DdiContext {
    double alpha = 5.0;
    StopConfig stop;
    // Warm start for the forward solve; the caller keeps it alive.
    const DdiSolution* previous = nullptr;
};

// Minimizes the gradient-consistency energy plus alpha times the (optionally
// confidence-weighted) observation energy, solving the normal equations
// A^T A x = A^T b with conjugate gradient.
DdiSolution ddi_forward(const GradientField& g, const SparseObservations& obs,
                        const ConfidenceMap* conf, const DdiContext& ctx);

// Vector-Jacobian product of the integration with respect to the gradient
// field: solves A^T A v = grad_out (warm-started from cached_adjoint) and
// reads the first two blocks of A v. Updates sol.cached_adjoint.
GradientField ddi_backward_gradients(DdiSolution& sol, const DepthMap& grad_out);

// Vector-Jacobian product with respect to the confidence map: per valid pixel
// v_p * alpha * (obs_p - depth_p), zero elsewhere. Requires a solution
// produced with a confidence map. Updates sol.cached_adjoint.
ConfidenceMap ddi_backward_confidence(DdiSolution& sol, const DepthMap& grad_out);

}  // namespace ognidc
