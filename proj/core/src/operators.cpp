#include "ognidc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ognidc/errors.hpp"

namespace ognidc {

namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw ShapeError(std::string(what) + ": expected length " + std::to_string(want) +
                         ", got " + std::to_string(got));
    }
}

}  // namespace

SystemConfig::SystemConfig(int h, int w, std::vector<std::uint8_t> msk, double alpha_weight,
                           const ConfidenceMap* confidence)
    : height(h), width(w), alpha(alpha_weight), mask(std::move(msk)) {
    if (h < 1 || w < 1) throw ShapeError("system dimensions must be at least 1x1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("observation weight alpha must be positive and finite");
    }
    require_length(mask.size(), pixel_count(), "system mask");
    for (std::uint8_t m : mask) {
        if (m != 0 && m != 1) throw DomainError("mask entries must be 0 or 1");
    }

    const double sqrt_alpha = std::sqrt(alpha);
    diag.resize(pixel_count());
    if (confidence != nullptr) {
        if (confidence->height != h || confidence->width != w) {
            throw ShapeError("confidence map does not match system dimensions");
        }
        confidence->check_unit_range();
        has_confidence = true;
        for (std::size_t p = 0; p < diag.size(); ++p) {
            diag[p] = mask[p] ? sqrt_alpha * std::sqrt(confidence->values[p]) : 0.0;
        }
    } else {
        for (std::size_t p = 0; p < diag.size(); ++p) {
            diag[p] = mask[p] ? sqrt_alpha : 0.0;
        }
    }
}

bool SystemConfig::has_observations() const {
    return std::any_of(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; });
}

ResidualVector apply_A(const SystemConfig& cfg, std::span<const double> d) {
    require_length(d.size(), cfg.pixel_count(), "apply_A input");
    const int h = cfg.height;
    const int w = cfg.width;

    ResidualVector r;
    r.rx.resize(cfg.gx_count());
    r.ry.resize(cfg.gy_count());
    r.ro.resize(cfg.pixel_count());

    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        const std::size_t erow = static_cast<std::size_t>(y) * (w - 1);
        for (int i = 0; i + 1 < w; ++i) {
            r.rx[erow + i] = d[row + i + 1] - d[row + i];
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            r.ry[row + x] = d[row + w + x] - d[row + x];
        }
    }
    for (std::size_t p = 0; p < r.ro.size(); ++p) {
        r.ro[p] = cfg.diag[p] * d[p];
    }
    return r;
}

std::vector<double> apply_At(const SystemConfig& cfg, const ResidualVector& r) {
    require_length(r.rx.size(), cfg.gx_count(), "apply_At rx block");
    require_length(r.ry.size(), cfg.gy_count(), "apply_At ry block");
    require_length(r.ro.size(), cfg.pixel_count(), "apply_At ro block");
    const int h = cfg.height;
    const int w = cfg.width;

    std::vector<double> out(cfg.pixel_count(), 0.0);
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        const std::size_t erow = static_cast<std::size_t>(y) * (w - 1);
        for (int i = 0; i + 1 < w; ++i) {
            const double v = r.rx[erow + i];
            out[row + i + 1] += v;
            out[row + i] -= v;
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            const double v = r.ry[row + x];
            out[row + w + x] += v;
            out[row + x] -= v;
        }
    }
    for (std::size_t p = 0; p < out.size(); ++p) {
        out[p] += cfg.diag[p] * r.ro[p];
    }
    return out;
}

void apply_normal(const SystemConfig& cfg, std::span<const double> d, std::span<double> out) {
    require_length(d.size(), cfg.pixel_count(), "apply_normal input");
    require_length(out.size(), cfg.pixel_count(), "apply_normal output");
    const int h = cfg.height;
    const int w = cfg.width;

    std::fill(out.begin(), out.end(), 0.0);
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int i = 0; i + 1 < w; ++i) {
            const double v = d[row + i + 1] - d[row + i];
            out[row + i + 1] += v;
            out[row + i] -= v;
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            const double v = d[row + w + x] - d[row + x];
            out[row + w + x] += v;
            out[row + x] -= v;
        }
    }
    for (std::size_t p = 0; p < out.size(); ++p) {
        out[p] += cfg.diag[p] * (cfg.diag[p] * d[p]);
    }
}

std::vector<double> apply_normal(const SystemConfig& cfg, std::span<const double> d) {
    std::vector<double> out(cfg.pixel_count());
    apply_normal(cfg, d, out);
    return out;
}

std::vector<double> build_rhs(const SystemConfig& cfg, const GradientField& g,
                              const SparseObservations& obs) {
    if (g.height != cfg.height || g.width != cfg.width) {
        throw ShapeError("gradient field does not match system dimensions");
    }
    if (obs.height != cfg.height || obs.width != cfg.width) {
        throw ShapeError("observations do not match system dimensions");
    }
    const int h = cfg.height;
    const int w = cfg.width;

    std::vector<double> out(cfg.pixel_count(), 0.0);
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        const std::size_t erow = static_cast<std::size_t>(y) * (w - 1);
        for (int i = 0; i + 1 < w; ++i) {
            const double v = g.gx[erow + i];
            out[row + i + 1] += v;
            out[row + i] -= v;
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            const double v = g.gy[row + x];
            out[row + w + x] += v;
            out[row + x] -= v;
        }
    }
    for (std::size_t p = 0; p < out.size(); ++p) {
        out[p] += cfg.diag[p] * (cfg.diag[p] * obs.values[p]);
    }
    return out;
}

}  // namespace ognidc
