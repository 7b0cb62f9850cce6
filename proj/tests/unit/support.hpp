#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "fracheat/sampled.hpp"

namespace fracheat::testing {

inline double inf() { return std::numeric_limits<double>::infinity(); }

inline double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Nonnegative random values on B(0, radius), zero elsewhere.
inline SampledFunction random_function(const GridSpec& grid, std::uint64_t seed, double radius = 2.0,
                                       bool signed_values = false) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(signed_values ? -1.0 : 0.0, 1.0);
    std::vector<double> v(grid.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (grid.norm_of_node(i) < radius) v[i] = u(rng);
    return SampledFunction(grid, std::move(v));
}

}  // namespace fracheat::testing
