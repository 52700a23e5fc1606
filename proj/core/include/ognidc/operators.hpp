#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ognidc/grid.hpp"

namespace ognidc {

// Configuration of the stacked least-squares operator
//
//       ( Dx )            ( gx_bar                  )
//   A = ( Dy ),       b = ( gy_bar                  )
//       ( diag(s) )       ( s * obs_bar             )
//
// where Dx/Dy are the forward-difference operators and
// s = sqrt(alpha) * sqrt(conf) * mask per pixel (conf treated as all-ones
// when absent). The square roots are computed once here so the forward and
// backward passes see identical weights.
struct SystemConfig {
    int height = 0;
    int width = 0;
    double alpha = 0.0;
    std::vector<std::uint8_t> mask;
    bool has_confidence = false;
    std::vector<double> diag;  // sqrt(alpha) * sqrt(conf) * mask

    SystemConfig() = default;
    SystemConfig(int h, int w, std::vector<std::uint8_t> msk, double alpha_weight,
                 const ConfidenceMap* confidence = nullptr);

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    std::size_t gx_count() const {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width - 1);
    }
    std::size_t gy_count() const {
        return static_cast<std::size_t>(height - 1) * static_cast<std::size_t>(width);
    }
    bool has_observations() const;
};

// The three stacked blocks of A*d (or of any vector living in A's range).
struct ResidualVector {
    std::vector<double> rx;
    std::vector<double> ry;
    std::vector<double> ro;
};

// r = A * d, matrix-free.
ResidualVector apply_A(const SystemConfig& cfg, std::span<const double> d);

// out = A^T * r, the exact adjoint of apply_A.
std::vector<double> apply_At(const SystemConfig& cfg, const ResidualVector& r);

// out = (A^T A) * d without materializing the residual blocks.
void apply_normal(const SystemConfig& cfg, std::span<const double> d, std::span<double> out);
std::vector<double> apply_normal(const SystemConfig& cfg, std::span<const double> d);

// Returns A^T b for b = (gx_bar, gy_bar, s * obs_bar).
std::vector<double> build_rhs(const SystemConfig& cfg, const GradientField& g,
                              const SparseObservations& obs);

}  // namespace ognidc
