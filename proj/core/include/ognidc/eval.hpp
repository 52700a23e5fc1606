#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ognidc/grid.hpp"

namespace ognidc {

// Depth-completion error metrics over a validity mask. Inverse-depth metrics
// are reported in 1/km.
struct MetricReport {
    double rmse_m = 0.0;
    double mae_m = 0.0;
    double rel = 0.0;
    double irmse_per_km = 0.0;
    double imae_per_km = 0.0;
    std::size_t valid_count = 0;

    std::string to_json() const;
};

MetricReport compute_metrics(const DepthMap& pred, const DepthMap& gt,
                             std::span<const std::uint8_t> valid);

// Mask of pixels with positive ground truth; the default validity mask.
std::vector<std::uint8_t> positivity_mask(const DepthMap& gt);

struct DepthRange {
    double min_m = 1.0;
    double max_m = 10.0;
};

// Deterministic piecewise-smooth scene: tilted planes, spherical caps, and
// rectangular depth steps, clamped into the range.
struct SceneSpec {
    int height = 64;
    int width = 64;
    std::uint64_t seed = 0;
    int planes = 1;
    int caps = 2;
    int steps = 2;
    double max_tilt_m = 2.0;
    DepthRange range;
};

DepthMap synth_scene(const SceneSpec& spec);

// Uniform sample of n positive-depth pixels without replacement.
SparseObservations sample_random_points(const DepthMap& gt, std::size_t n, std::uint64_t seed);

// Keeps valid pixels only on rows r with r % keep_every == 0.
SparseObservations subsample_rows(const SparseObservations& obs, int keep_every);

// With probability 1/2 returns the input untouched; otherwise draws a drop
// fraction f uniform in [0,1] and removes each valid pixel with probability f.
SparseObservations random_mask_augment(const SparseObservations& obs, std::uint64_t seed);

// Assembles the dense normal equations and solves them by direct
// factorization. Reference path for the matrix-free solver; capped at 400
// unknowns.
DepthMap dense_oracle_solve(const GradientField& g, const SparseObservations& obs,
                            const ConfidenceMap* conf, double alpha);

}  // namespace ognidc
