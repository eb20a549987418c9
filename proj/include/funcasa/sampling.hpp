#pragma once

#include "funcasa/linalg.hpp"

#include <array>
#include <cstdint>
#include <random>

namespace funcasa {

/// SplitMix64 finalizer; used to derive independent per-stratum seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

/// Radical inverse of `index` in base `base`.
inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double factor = inv;
    double result = 0.0;
    while (index > 0) {
        result += static_cast<double>(index % base) * factor;
        index /= base;
        factor *= inv;
    }
    return result;
}

/// Halton point in [0,1)^dim. Index 0 is skipped by callers that want to
/// avoid the corner.
inline Vec halton(std::uint64_t index, int dim) {
    static constexpr std::array<std::uint64_t, kMaxDim> primes{2, 3, 5, 7, 11, 13, 17, 19};
    Vec p(dim);
    for (int i = 0; i < dim; ++i) p[i] = radical_inverse(index, primes[static_cast<std::size_t>(i)]);
    return p;
}

/// Low-discrepancy direction on the unit sphere S^{dim-1}.
inline Vec halton_direction(std::uint64_t index, int dim) {
    if (dim == 1) return Vec::Constant(1, (index % 2 == 0) ? 1.0 : -1.0);
    if (dim == 2) {
        const double a = 2.0 * M_PI * radical_inverse(index + 1, 2);
        Vec v(2);
        v << std::cos(a), std::sin(a);
        return v;
    }
    // Box-Muller on Halton coordinates: not uniform in the strict sense but
    // well spread, which is all boundary probing needs.
    Vec v(dim);
    for (int i = 0; i < dim; i += 2) {
        Vec u = halton(index + 1, std::min(dim, i + 2));
        const double u1 = std::max(u[i], 1e-12);
        const double u2 = (i + 1 < dim) ? u[i + 1] : 0.25;
        const double r = std::sqrt(-2.0 * std::log(u1));
        v[i] = r * std::cos(2.0 * M_PI * u2);
        if (i + 1 < dim) v[i + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    const double norm = v.norm();
    if (norm == 0.0) return Vec::Unit(dim, 0);
    return v / norm;
}

}  // namespace funcasa
