#pragma once

#include <cstdint>
#include <random>

namespace ognidc {

// Uniform doubles drawn directly from the generator's bits so that streams
// are reproducible independent of the standard library's distribution
// implementations.
inline double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_real(rng);
}

// Uniform integer in [0, bound). Modulo bias is negligible at 64-bit width.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
    return bound == 0 ? 0 : rng() % bound;
}

}  // namespace ognidc
