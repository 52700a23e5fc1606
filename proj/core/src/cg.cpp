#include "ognidc/cg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ognidc/errors.hpp"

namespace ognidc {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool stalled(const std::vector<double>& history, const StopConfig& stop) {
    const auto w = static_cast<std::size_t>(stop.stall_window);
    if (history.size() < 2 * w) return false;
    const auto last = history.end();
    const double best_now = *std::min_element(last - w, last);
    const double best_prev = *std::min_element(last - 2 * w, last - w);
    return best_now > (1.0 - stop.stall_factor) * best_prev;
}

}  // namespace

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::kTolerance: return "tolerance";
        case StopReason::kStalled: return "stalled";
        case StopReason::kMaxIters: return "max_iters";
    }
    return "unknown";
}

void StopConfig::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
    if (stall_window < 1) throw DomainError("stall_window must be at least 1");
    if (!(stall_factor > 0.0 && stall_factor < 1.0)) {
        throw DomainError("stall_factor must lie in (0, 1)");
    }
}

std::size_t StopConfig::effective_max_iters(std::size_t n) const {
    if (max_iters > 0) return max_iters;
    return std::max<std::size_t>(1, 20 * n);
}

SolveResult solve(const LinearOperator& apply, std::span<const double> rhs,
                  std::span<const double> x0, const StopConfig& stop) {
    stop.validate();
    const std::size_t n = rhs.size();
    if (n == 0) throw ShapeError("cannot solve an empty system");
    if (!x0.empty() && x0.size() != n) {
        throw ShapeError("initial guess length does not match the right-hand side");
    }
    const std::size_t cap = stop.effective_max_iters(n);

    SolveResult res;
    res.x.assign(n, 0.0);
    res.stats.warm_started = !x0.empty();

    // A zero right-hand side has the exact solution zero; skip the solve
    // rather than chasing the epsilon-floored relative residual.
    bool rhs_zero = true;
    for (double v : rhs) {
        if (v != 0.0) {
            rhs_zero = false;
            break;
        }
    }
    if (rhs_zero) {
        res.stats.final_rel_residual = 0.0;
        res.stats.stop_reason = StopReason::kTolerance;
        return res;
    }

    std::vector<double> r(n), p(n), Ap(n);
    if (res.stats.warm_started) {
        std::copy(x0.begin(), x0.end(), res.x.begin());
        apply(res.x, Ap);
        for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - Ap[i];
    } else {
        std::copy(rhs.begin(), rhs.end(), r.begin());
    }

    const double denom = std::max(norm2(rhs), std::numeric_limits<double>::epsilon());
    double rel = norm2(r) / denom;
    if (!std::isfinite(rel)) throw DivergenceError("initial residual is not finite");

    res.stats.final_rel_residual = rel;
    res.stats.stop_reason = StopReason::kTolerance;
    if (rel < stop.rel_tol) return res;  // 0 iterations

    std::vector<double> history{rel};
    std::copy(r.begin(), r.end(), p.begin());
    double rs = dot(r, r);

    for (std::size_t k = 1; k <= cap; ++k) {
        apply(p, Ap);
        const double p_ap = dot(p, Ap);
        if (!std::isfinite(p_ap) || p_ap <= 0.0) {
            throw DivergenceError("operator produced non-positive curvature; not SPD?");
        }
        const double step = rs / p_ap;
        for (std::size_t i = 0; i < n; ++i) {
            res.x[i] += step * p[i];
            r[i] -= step * Ap[i];
        }
        rel = norm2(r) / denom;
        if (!std::isfinite(rel)) throw DivergenceError("residual became non-finite");

        history.push_back(rel);
        res.stats.iterations = k;
        res.stats.final_rel_residual = rel;
        if (rel < stop.rel_tol) {
            res.stats.stop_reason = StopReason::kTolerance;
            return res;
        }
        if (stalled(history, stop)) {
            res.stats.stop_reason = StopReason::kStalled;
            return res;
        }

        const double rs_next = dot(r, r);
        const double beta = rs_next / rs;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rs = rs_next;
    }

    res.stats.stop_reason = StopReason::kMaxIters;
    return res;
}

}  // namespace ognidc
