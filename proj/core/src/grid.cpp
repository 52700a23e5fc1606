#include "ognidc/grid.hpp"

#include <cmath>
#include <string>

#include "ognidc/errors.hpp"

namespace ognidc {

namespace {

void require_dims(int h, int w) {
    if (h < 1 || w < 1) {
        throw ShapeError("grid dimensions must be at least 1x1, got " +
                         std::to_string(h) + "x" + std::to_string(w));
    }
}

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw ShapeError(std::string(what) + ": expected " + std::to_string(want) +
                         " entries, got " + std::to_string(got));
    }
}

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw DomainError(std::string(what) + " contains a non-finite value");
        }
    }
}

}  // namespace

DepthMap::DepthMap(int h, int w, double fill) : height(h), width(w) {
    require_dims(h, w);
    values.assign(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill);
}

DepthMap::DepthMap(int h, int w, std::vector<double> data)
    : height(h), width(w), values(std::move(data)) {
    require_dims(h, w);
    require_size(values.size(), static_cast<std::size_t>(h) * static_cast<std::size_t>(w),
                 "depth map values");
}

void DepthMap::check_finite(const char* what) const { require_finite(values, what); }

GradientField::GradientField(int h, int w) : height(h), width(w) {
    require_dims(h, w);
    gx.assign(static_cast<std::size_t>(h) * static_cast<std::size_t>(w - 1), 0.0);
    gy.assign(static_cast<std::size_t>(h - 1) * static_cast<std::size_t>(w), 0.0);
}

GradientField::GradientField(int h, int w, std::vector<double> gx_data,
                             std::vector<double> gy_data)
    : height(h), width(w), gx(std::move(gx_data)), gy(std::move(gy_data)) {
    require_dims(h, w);
    require_size(gx.size(), static_cast<std::size_t>(h) * static_cast<std::size_t>(w - 1),
                 "gradient gx");
    require_size(gy.size(), static_cast<std::size_t>(h - 1) * static_cast<std::size_t>(w),
                 "gradient gy");
}

void GradientField::check_finite(const char* what) const {
    require_finite(gx, what);
    require_finite(gy, what);
}

SparseObservations::SparseObservations(int h, int w) : height(h), width(w) {
    require_dims(h, w);
    const auto n = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
    values.assign(n, 0.0);
    mask.assign(n, 0);
}

SparseObservations::SparseObservations(int h, int w, std::vector<double> vals,
                                       std::vector<std::uint8_t> msk)
    : height(h), width(w), values(std::move(vals)), mask(std::move(msk)) {
    require_dims(h, w);
    const auto n = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
    require_size(values.size(), n, "observation values");
    require_size(mask.size(), n, "observation mask");
    for (std::uint8_t m : mask) {
        if (m != 0 && m != 1) throw DomainError("observation mask entries must be 0 or 1");
    }
}

std::size_t SparseObservations::valid_count() const {
    std::size_t n = 0;
    for (std::uint8_t m : mask) n += m;
    return n;
}

void SparseObservations::check_finite(const char* what) const {
    require_finite(values, what);
}

ConfidenceMap::ConfidenceMap(int h, int w, double fill) : height(h), width(w) {
    require_dims(h, w);
    values.assign(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill);
}

ConfidenceMap::ConfidenceMap(int h, int w, std::vector<double> data)
    : height(h), width(w), values(std::move(data)) {
    require_dims(h, w);
    require_size(values.size(), static_cast<std::size_t>(h) * static_cast<std::size_t>(w),
                 "confidence values");
}

void ConfidenceMap::check_unit_range(const char* what) const {
    for (double c : values) {
        if (!std::isfinite(c) || c < 0.0 || c > 1.0) {
            throw DomainError(std::string(what) + " values must lie in [0, 1]");
        }
    }
}

UpsampleWeights::UpsampleWeights(int low_h, int low_w, int f)
    : low_height(low_h), low_width(low_w), factor(f) {
    require_dims(low_h, low_w);
    if (f < 1) throw ShapeError("upsample factor must be at least 1");
    weights.assign(static_cast<std::size_t>(low_h) * static_cast<std::size_t>(low_w) *
                       static_cast<std::size_t>(f) * static_cast<std::size_t>(f) * 9,
                   0.0);
}

UpsampleWeights UpsampleWeights::uniform(int low_h, int low_w, int f) {
    UpsampleWeights w(low_h, low_w, f);
    for (double& x : w.weights) x = 1.0 / 9.0;
    return w;
}

UpsampleWeights UpsampleWeights::center_one_hot(int low_h, int low_w, int f) {
    UpsampleWeights w(low_h, low_w, f);
    for (std::size_t p = 0; p + 9 <= w.weights.size(); p += 9) w.weights[p + 4] = 1.0;
    return w;
}

std::vector<double> flatten(const DepthMap& map) { return map.values; }

DepthMap unflatten(int height, int width, std::span<const double> flat) {
    require_dims(height, width);
    require_size(flat.size(),
                 static_cast<std::size_t>(height) * static_cast<std::size_t>(width),
                 "flattened depth");
    return DepthMap(height, width, std::vector<double>(flat.begin(), flat.end()));
}

GradientField finite_difference(const DepthMap& depth) {
    GradientField g(depth.height, depth.width);
    for (int y = 0; y < depth.height; ++y) {
        for (int i = 0; i + 1 < depth.width; ++i) {
            g.gx_at(y, i) = depth.at(y, i + 1) - depth.at(y, i);
        }
    }
    for (int y = 0; y + 1 < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            g.gy_at(y, x) = depth.at(y + 1, x) - depth.at(y, x);
        }
    }
    return g;
}

PaddedGradients gradient_to_padded(const GradientField& g) {
    PaddedGradients out{DepthMap(g.height, g.width), DepthMap(g.height, g.width)};
    for (int y = 0; y < g.height; ++y) {
        for (int i = 0; i + 1 < g.width; ++i) {
            out.gx.at(y, i + 1) = g.gx_at(y, i);
        }
    }
    for (int y = 0; y + 1 < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            out.gy.at(y + 1, x) = g.gy_at(y, x);
        }
    }
    return out;
}

GradientField gradient_from_padded(const PaddedGradients& padded) {
    if (padded.gx.height != padded.gy.height || padded.gx.width != padded.gy.width) {
        throw ShapeError("padded gradient channels disagree on dimensions");
    }
    GradientField g(padded.gx.height, padded.gx.width);
    for (int y = 0; y < g.height; ++y) {
        for (int i = 0; i + 1 < g.width; ++i) {
            g.gx_at(y, i) = padded.gx.at(y, i + 1);
        }
    }
    for (int y = 0; y + 1 < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            g.gy_at(y, x) = padded.gy.at(y + 1, x);
        }
    }
    return g;
}

SparseObservations masked_avg_pool(const SparseObservations& obs, int factor) {
    if (factor <= 0) throw ShapeError("pooling factor must be positive");
    if (obs.height % factor != 0 || obs.width % factor != 0) {
        throw ShapeError("pooling factor " + std::to_string(factor) +
                         " does not divide " + std::to_string(obs.height) + "x" +
                         std::to_string(obs.width));
    }
    SparseObservations out(obs.height / factor, obs.width / factor);
    for (int oy = 0; oy < out.height; ++oy) {
        for (int ox = 0; ox < out.width; ++ox) {
            double sum = 0.0;
            int count = 0;
            for (int dy = 0; dy < factor; ++dy) {
                for (int dx = 0; dx < factor; ++dx) {
                    const std::size_t p = obs.idx(oy * factor + dy, ox * factor + dx);
                    if (obs.mask[p]) {
                        sum += obs.values[p];
                        ++count;
                    }
                }
            }
            if (count > 0) {
                out.values[out.idx(oy, ox)] = sum / count;
                out.mask[out.idx(oy, ox)] = 1;
            }
        }
    }
    return out;
}

SparseObservations crop_to_multiple(const SparseObservations& obs, int factor) {
    if (factor <= 0) throw ShapeError("crop factor must be positive");
    const int h = (obs.height / factor) * factor;
    const int w = (obs.width / factor) * factor;
    if (h < 1 || w < 1) {
        throw ShapeError("grid smaller than one " + std::to_string(factor) + "x" +
                         std::to_string(factor) + " window");
    }
    if (h == obs.height && w == obs.width) return obs;
    SparseObservations out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            out.values[out.idx(y, x)] = obs.values[obs.idx(y, x)];
            out.mask[out.idx(y, x)] = obs.mask[obs.idx(y, x)];
        }
    }
    return out;
}

DepthMap convex_upsample(const DepthMap& low, const UpsampleWeights& weights) {
    if (low.height != weights.low_height || low.width != weights.low_width) {
        throw ShapeError("upsample weights sized for " +
                         std::to_string(weights.low_height) + "x" +
                         std::to_string(weights.low_width) + ", input is " +
                         std::to_string(low.height) + "x" + std::to_string(low.width));
    }
    const int f = weights.factor;
    const int out_h = low.height * f;
    const int out_w = low.width * f;

    // Simplex invariant: nonnegative, sums to 1 within 1e-6.
    for (std::size_t p = 0; p + 9 <= weights.weights.size(); p += 9) {
        double sum = 0.0;
        for (int k = 0; k < 9; ++k) {
            const double c = weights.weights[p + k];
            if (!(c >= 0.0)) throw DomainError("upsample weights must be nonnegative");
            sum += c;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw DomainError("upsample weight 9-vectors must sum to 1");
        }
    }

    DepthMap out(out_h, out_w);
    for (int oy = 0; oy < out_h; ++oy) {
        const int py = oy / f;
        for (int ox = 0; ox < out_w; ++ox) {
            const int px = ox / f;
            double acc = 0.0;
            for (int k = 0; k < 9; ++k) {
                int ny = py + k / 3 - 1;
                int nx = px + k % 3 - 1;
                if (ny < 0) ny = 0;
                if (ny >= low.height) ny = low.height - 1;
                if (nx < 0) nx = 0;
                if (nx >= low.width) nx = low.width - 1;
                acc += weights.at(oy, ox, k) * low.at(ny, nx);
            }
            out.at(oy, ox) = acc;
        }
    }
    return out;
}

}  // namespace ognidc
