#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ognidc/ddi.hpp"
#include "ognidc/grid.hpp"

namespace ognidc {

// Produces a gradient-field update dG from the current state; the driver
// applies G_t = G_{t-1} + dG.
class Refiner {
public:
    virtual ~Refiner() = default;
    virtual GradientField propose(const GradientField& current, const DepthMap& depth,
                                  const SparseObservations& obs) const = 0;
};

// dG = 0: the loop is a fixed point.
class ZeroRefiner final : public Refiner {
public:
    GradientField propose(const GradientField& current, const DepthMap& depth,
                          const SparseObservations& obs) const override;
};

// dG = damping * (target - current). damping = 1 jumps straight to the
// target gradients.
class OracleRefiner final : public Refiner {
public:
    OracleRefiner(GradientField target, double damping = 1.0);
    GradientField propose(const GradientField& current, const DepthMap& depth,
                          const SparseObservations& obs) const override;

private:
    GradientField target_;
    double damping_;
};

// Parses "zero", "oracle", or "damped:<factor>". The target gradients feed
// the oracle variants and are ignored by "zero".
std::unique_ptr<Refiner> make_refiner(const std::string& name, const GradientField& target);

struct RefinementStep {
    GradientField gradients;
    DdiSolution solution;
};

struct RefinementTrace {
    DdiSolution initial;               // integration of the all-zero field
    std::vector<RefinementStep> steps;  // exactly the requested step count

    std::size_t total_cg_iterations() const;
};

// Runs the iterate-integrate loop: G_0 = 0, then T rounds of
// G_t = G_{t-1} + refiner(...), D_t = integrate(G_t), each integration
// warm-started from the previous solution unless warm_start is false.
RefinementTrace run_refinement(const SparseObservations& obs, const ConfidenceMap* conf,
                               const Refiner& refiner, int steps, const DdiContext& ctx,
                               bool warm_start = true);

struct DepthPrediction {
    DepthMap full;
    DepthMap upsampled;
};

struct LossOptions {
    double gamma = 0.9;
    // Sums over valid pixels by default; the mean variant normalizes each
    // term by the valid count (entry count for gradients).
    bool mean_over_valid = false;
    // The absolute-error terms can be dropped to obtain a smooth objective
    // for derivative checks.
    bool include_l1 = true;
};

// Sum over steps of gamma^(T-t) * (L2^2 + L1) on both prediction maps,
// restricted to valid pixels.
double loss_depth(std::span<const DepthPrediction> predictions, const DepthMap& gt,
                  std::span<const std::uint8_t> valid, const LossOptions& opts = {});

// Sum over steps of gamma^(T-t) * L1 over all gradient entries.
double loss_gradients(std::span<const GradientField> predictions, const GradientField& gt,
                      const LossOptions& opts = {});

double combined_loss(double depth_loss, double gradient_loss, double lambda = 1.0);

// Composes the squared-error depth loss with the integrator on a random
// instance and compares the backward-propagated gradient-field cotangent
// against central finite differences. Returns the max relative error.
double end_to_end_vjp_check(std::uint64_t seed, int height, int width);

}  // namespace ognidc
