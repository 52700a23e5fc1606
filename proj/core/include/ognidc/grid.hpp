#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ognidc {

// Dense 2-D grid of depth values in meters, row-major (y outer, x inner).
// Also used as the generic grid-shaped buffer for cotangents and masks.
struct DepthMap {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    DepthMap() = default;
    DepthMap(int h, int w, double fill = 0.0);
    DepthMap(int h, int w, std::vector<double> data);

    double& at(int y, int x) { return values[idx(y, x)]; }
    double at(int y, int x) const { return values[idx(y, x)]; }
    std::size_t idx(int y, int x) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(x);
    }
    std::size_t pixel_count() const { return values.size(); }

    // DomainError on NaN/Inf entries.
    void check_finite(const char* what = "depth map") const;
};

// Depth differences between adjacent pixels, stored compactly:
// gx has height*(width-1) entries, gx(y, i) = D(y, i+1) - D(y, i);
// gy has (height-1)*width entries, gy(y, x) = D(y+1, x) - D(y, x).
struct GradientField {
    int height = 0;
    int width = 0;
    std::vector<double> gx;
    std::vector<double> gy;

    GradientField() = default;
    GradientField(int h, int w);  // zero-filled
    GradientField(int h, int w, std::vector<double> gx_data, std::vector<double> gy_data);

    double& gx_at(int y, int i) { return gx[gx_idx(y, i)]; }
    double gx_at(int y, int i) const { return gx[gx_idx(y, i)]; }
    double& gy_at(int y, int x) { return gy[gy_idx(y, x)]; }
    double gy_at(int y, int x) const { return gy[gy_idx(y, x)]; }

    std::size_t gx_idx(int y, int i) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width - 1) +
               static_cast<std::size_t>(i);
    }
    std::size_t gy_idx(int y, int x) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(x);
    }
    std::size_t entry_count() const { return gx.size() + gy.size(); }

    void check_finite(const char* what = "gradient field") const;
};

// Observed depth values plus a {0,1} validity mask.
struct SparseObservations {
    int height = 0;
    int width = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;

    SparseObservations() = default;
    SparseObservations(int h, int w);  // all invalid, zero values
    SparseObservations(int h, int w, std::vector<double> vals, std::vector<std::uint8_t> msk);

    std::size_t idx(int y, int x) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(x);
    }
    std::size_t pixel_count() const { return values.size(); }
    std::size_t valid_count() const;

    void set(int y, int x, double depth) {
        values[idx(y, x)] = depth;
        mask[idx(y, x)] = 1;
    }

    void check_finite(const char* what = "observations") const;
};

// Per-pixel observation weight. Values must lie in [0,1] when used as a
// weighting; the range is validated at the point of use so the same type can
// carry confidence cotangents.
struct ConfidenceMap {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    ConfidenceMap() = default;
    ConfidenceMap(int h, int w, double fill = 1.0);
    ConfidenceMap(int h, int w, std::vector<double> data);

    double& at(int y, int x) { return values[idx(y, x)]; }
    double at(int y, int x) const { return values[idx(y, x)]; }
    std::size_t idx(int y, int x) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(x);
    }

    // DomainError unless every value is finite and in [0,1].
    void check_unit_range(const char* what = "confidence map") const;
};

// Convex-combination weights for integer-factor upsampling. Each output pixel
// carries 9 coefficients over the 3x3 low-resolution neighborhood of its
// parent cell, stored row-major by output pixel; coefficient k addresses
// neighbor (dy, dx) = (k/3 - 1, k%3 - 1).
struct UpsampleWeights {
    int low_height = 0;
    int low_width = 0;
    int factor = 1;
    std::vector<double> weights;

    UpsampleWeights() = default;
    UpsampleWeights(int low_h, int low_w, int f);  // zero-filled, invalid until set

    double& at(int oy, int ox, int k) { return weights[w_idx(oy, ox, k)]; }
    double at(int oy, int ox, int k) const { return weights[w_idx(oy, ox, k)]; }
    std::size_t w_idx(int oy, int ox, int k) const {
        return (static_cast<std::size_t>(oy) * static_cast<std::size_t>(low_width * factor) +
                static_cast<std::size_t>(ox)) * 9 + static_cast<std::size_t>(k);
    }

    // All coefficients equal to 1/9.
    static UpsampleWeights uniform(int low_h, int low_w, int f);
    // Weight 1 on the center neighbor: nearest-neighbor replication.
    static UpsampleWeights center_one_hot(int low_h, int low_w, int f);
};

// Row-major flattening, y outer, x inner. Shared by every module that moves
// between grid and vector form.
std::vector<double> flatten(const DepthMap& map);
DepthMap unflatten(int height, int width, std::span<const double> flat);

// Finite differences between adjacent pixels.
GradientField finite_difference(const DepthMap& depth);

// Zero-padded two-channel view of a gradient field: each channel is H x W
// with the difference stored at its right/bottom pixel, so gx(y, 0) and
// gy(0, x) are zero. Round-trips with gradient_from_padded.
struct PaddedGradients {
    DepthMap gx;
    DepthMap gy;
};
PaddedGradients gradient_to_padded(const GradientField& g);
GradientField gradient_from_padded(const PaddedGradients& padded);

// Average over valid pixels in each factor x factor window. Output mask is 1
// iff the window had at least one valid pixel; value is 0 where the output
// mask is 0. Factor must divide both dimensions (use crop_to_multiple first).
SparseObservations masked_avg_pool(const SparseObservations& obs, int factor);

// Drops the bottom/right remainder so that factor divides both dimensions.
SparseObservations crop_to_multiple(const SparseObservations& obs, int factor);

// Each output pixel is a convex combination of the 3x3 low-resolution
// neighborhood of its parent cell; border neighborhoods are replicated.
DepthMap convex_upsample(const DepthMap& low, const UpsampleWeights& weights);

}  // namespace ognidc
