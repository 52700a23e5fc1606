#include "ognidc/eval.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "ognidc/errors.hpp"
#include "ognidc/parallel.hpp"
#include "ognidc/random.hpp"

namespace ognidc {

std::string MetricReport::to_json() const {
    std::ostringstream out;
    out.precision(12);
    out << "{\"rmse_m\":" << rmse_m << ",\"mae_m\":" << mae_m << ",\"rel\":" << rel
        << ",\"irmse_per_km\":" << irmse_per_km << ",\"imae_per_km\":" << imae_per_km
        << ",\"valid_count\":" << valid_count << "}";
    return out.str();
}

MetricReport compute_metrics(const DepthMap& pred, const DepthMap& gt,
                             std::span<const std::uint8_t> valid) {
    if (pred.height != gt.height || pred.width != gt.width) {
        throw ShapeError("prediction and ground truth disagree on dimensions");
    }
    if (valid.size() != gt.values.size()) {
        throw ShapeError("validity mask does not match the grid size");
    }

    double se = 0.0, ae = 0.0, rel_sum = 0.0, ise = 0.0, iae = 0.0;
    std::size_t count = 0;
    for (std::size_t p = 0; p < gt.values.size(); ++p) {
        if (!valid[p]) continue;
        const double g = gt.values[p];
        if (!(g > 0.0)) {
            throw DomainError("ground truth must be positive at valid pixels");
        }
        const double e = pred.values[p] - g;
        se += e * e;
        ae += std::abs(e);
        rel_sum += std::abs(e) / g;
        const double ip = 1.0 / std::max(pred.values[p], 1e-6);
        const double ie = ip - 1.0 / g;
        ise += ie * ie;
        iae += std::abs(ie);
        ++count;
    }
    if (count == 0) throw EmptyMaskError("no valid pixels to evaluate");

    const double n = static_cast<double>(count);
    MetricReport report;
    report.rmse_m = std::sqrt(se / n);
    report.mae_m = ae / n;
    report.rel = rel_sum / n;
    report.irmse_per_km = std::sqrt(ise / n) * 1000.0;
    report.imae_per_km = iae / n * 1000.0;
    report.valid_count = count;
    return report;
}

std::vector<std::uint8_t> positivity_mask(const DepthMap& gt) {
    std::vector<std::uint8_t> mask(gt.values.size());
    for (std::size_t p = 0; p < mask.size(); ++p) mask[p] = gt.values[p] > 0.0 ? 1 : 0;
    return mask;
}

DepthMap synth_scene(const SceneSpec& spec) {
    if (spec.height < 1 || spec.width < 1) throw ShapeError("scene dimensions must be positive");
    if (!(spec.range.min_m > 0.0) || !(spec.range.max_m > spec.range.min_m)) {
        throw DomainError("depth range must satisfy 0 < min < max");
    }
    if (spec.planes < 0 || spec.caps < 0 || spec.steps < 0 || spec.max_tilt_m < 0.0) {
        throw DomainError("primitive counts and tilt must be nonnegative");
    }

    const double mid = 0.5 * (spec.range.min_m + spec.range.max_m);
    const double span = spec.range.max_m - spec.range.min_m;

    struct Plane { double sx, sy, cx, cy; };
    struct Cap { double cx, cy, radius, amp; };
    struct Step { double x0, y0, x1, y1, offset; };

    // All parameters are drawn up front so the per-pixel evaluation can be
    // split across threads without touching the generator.
    std::mt19937_64 rng(spec.seed);
    std::vector<Plane> planes;
    for (int i = 0; i < spec.planes; ++i) {
        planes.push_back({uniform_real(rng, -spec.max_tilt_m, spec.max_tilt_m),
                          uniform_real(rng, -spec.max_tilt_m, spec.max_tilt_m),
                          unit_real(rng), unit_real(rng)});
    }
    const double min_dim = static_cast<double>(std::min(spec.height, spec.width));
    std::vector<Cap> caps;
    for (int i = 0; i < spec.caps; ++i) {
        caps.push_back({unit_real(rng), unit_real(rng),
                        uniform_real(rng, 0.12, 0.35) * min_dim,
                        uniform_real(rng, -0.15, 0.15) * span});
    }
    std::vector<Step> steps;
    for (int i = 0; i < spec.steps; ++i) {
        const double x0 = unit_real(rng), y0 = unit_real(rng);
        steps.push_back({x0, y0, x0 + uniform_real(rng, 0.15, 0.5),
                         y0 + uniform_real(rng, 0.15, 0.5),
                         uniform_real(rng, -0.2, 0.2) * span});
    }

    DepthMap out(spec.height, spec.width);
    parallel_for(0, spec.height, [&](int y) {
        const double fy = (y + 0.5) / spec.height;
        for (int x = 0; x < spec.width; ++x) {
            const double fx = (x + 0.5) / spec.width;
            double v = mid;
            for (const Plane& pl : planes) {
                v += pl.sx * (fx - pl.cx) + pl.sy * (fy - pl.cy);
            }
            for (const Cap& c : caps) {
                const double dx = (fx - c.cx) * spec.width;
                const double dy = (fy - c.cy) * spec.height;
                const double q = 1.0 - (dx * dx + dy * dy) / (c.radius * c.radius);
                if (q > 0.0) v += c.amp * std::sqrt(q);
            }
            for (const Step& s : steps) {
                if (fx >= s.x0 && fx < s.x1 && fy >= s.y0 && fy < s.y1) v += s.offset;
            }
            out.at(y, x) = std::clamp(v, spec.range.min_m, spec.range.max_m);
        }
    });
    return out;
}

SparseObservations sample_random_points(const DepthMap& gt, std::size_t n,
                                        std::uint64_t seed) {
    std::vector<std::size_t> candidates;
    candidates.reserve(gt.values.size());
    for (std::size_t p = 0; p < gt.values.size(); ++p) {
        if (gt.values[p] > 0.0) candidates.push_back(p);
    }
    if (n > candidates.size()) {
        throw DomainError("requested " + std::to_string(n) + " samples but only " +
                          std::to_string(candidates.size()) + " positive-depth pixels exist");
    }

    // Partial Fisher-Yates: the first n entries become the sample.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + uniform_index(rng, candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
    }

    SparseObservations obs(gt.height, gt.width);
    for (std::size_t i = 0; i < n; ++i) {
        obs.values[candidates[i]] = gt.values[candidates[i]];
        obs.mask[candidates[i]] = 1;
    }
    return obs;
}

SparseObservations subsample_rows(const SparseObservations& obs, int keep_every) {
    if (keep_every < 1) throw DomainError("keep_every must be at least 1");
    if (keep_every == 1) return obs;
    SparseObservations out(obs.height, obs.width);
    for (int y = 0; y < obs.height; y += keep_every) {
        for (int x = 0; x < obs.width; ++x) {
            const std::size_t p = obs.idx(y, x);
            if (obs.mask[p]) {
                out.values[p] = obs.values[p];
                out.mask[p] = 1;
            }
        }
    }
    return out;
}

SparseObservations random_mask_augment(const SparseObservations& obs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    if (unit_real(rng) < 0.5) return obs;  // untouched half of the samples

    const double drop_fraction = unit_real(rng);
    SparseObservations out = obs;
    for (std::size_t p = 0; p < out.mask.size(); ++p) {
        if (out.mask[p] && unit_real(rng) < drop_fraction) {
            out.mask[p] = 0;
            out.values[p] = 0.0;
        }
    }
    return out;
}

DepthMap dense_oracle_solve(const GradientField& g, const SparseObservations& obs,
                            const ConfidenceMap* conf, double alpha) {
    if (g.height != obs.height || g.width != obs.width) {
        throw ShapeError("gradient field and observations disagree on dimensions");
    }
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    g.check_finite();
    obs.check_finite();
    if (conf != nullptr) {
        if (conf->height != g.height || conf->width != g.width) {
            throw ShapeError("confidence map does not match the grid");
        }
        conf->check_unit_range();
    }
    const int h = g.height;
    const int w = g.width;
    const std::size_t n = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
    if (n > 400) {
        throw SizeError("dense oracle is capped at 400 unknowns, got " + std::to_string(n));
    }
    if (obs.valid_count() == 0) {
        throw SingularSystemError("no valid observations; the dense system is singular");
    }

    // Normal equations assembled directly from the energy terms: each
    // difference (d_r - d_l - g) contributes the 2x2 stencil, each valid
    // observation its weighted diagonal entry.
    Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
    Eigen::VectorXd atb = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

    auto pix = [w](int y, int x) {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
               static_cast<std::size_t>(x);
    };
    auto add_edge = [&](std::size_t l, std::size_t r, double gval) {
        const auto li = static_cast<Eigen::Index>(l);
        const auto ri = static_cast<Eigen::Index>(r);
        ata(li, li) += 1.0;
        ata(ri, ri) += 1.0;
        ata(li, ri) -= 1.0;
        ata(ri, li) -= 1.0;
        atb(ri) += gval;
        atb(li) -= gval;
    };
    for (int y = 0; y < h; ++y) {
        for (int i = 0; i + 1 < w; ++i) {
            add_edge(pix(y, i), pix(y, i + 1), g.gx_at(y, i));
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        for (int x = 0; x < w; ++x) {
            add_edge(pix(y, x), pix(y + 1, x), g.gy_at(y, x));
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t p = obs.idx(y, x);
            if (!obs.mask[p]) continue;
            const double weight = alpha * (conf != nullptr ? conf->values[p] : 1.0);
            const auto pi = static_cast<Eigen::Index>(p);
            ata(pi, pi) += weight;
            atb(pi) += weight * obs.values[p];
        }
    }

    Eigen::LDLT<Eigen::MatrixXd> factorization(ata);
    if (factorization.info() != Eigen::Success) {
        throw SingularSystemError("dense factorization failed");
    }
    Eigen::VectorXd x = factorization.solve(atb);
    return unflatten(h, w, std::span<const double>(x.data(), n));
}

}  // namespace ognidc
