#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ognidc {

enum class StopReason { kTolerance, kStalled, kMaxIters };

std::string to_string(StopReason reason);

struct StopConfig {
    // Stop when ||rhs - A x|| / max(||rhs||, eps) drops below rel_tol.
    double rel_tol = 1e-5;
    // Stop when the best residual of the last stall_window steps improved by
    // less than stall_factor relative to the best of the window before it.
    int stall_window = 10;
    double stall_factor = 0.01;
    // Hard cap; 0 derives 20 * n from the problem size at solve time.
    std::size_t max_iters = 0;

    void validate() const;
    std::size_t effective_max_iters(std::size_t n) const;
};

struct SolveStats {
    std::size_t iterations = 0;
    double final_rel_residual = 0.0;
    StopReason stop_reason = StopReason::kTolerance;
    bool warm_started = false;
};

// A symmetric positive-definite map applied matrix-free: out = A * in.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct SolveResult {
    std::vector<double> x;
    SolveStats stats;
};

// Conjugate gradient on an SPD operator. An empty x0 starts from the zero
// vector. Throws DivergenceError if the residual becomes non-finite or the
// operator reveals a non-positive curvature direction.
SolveResult solve(const LinearOperator& apply, std::span<const double> rhs,
                  std::span<const double> x0, const StopConfig& stop);

}  // namespace ognidc
