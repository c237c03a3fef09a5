#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace tunnelkit::test {

inline double relative_error(double actual, double expected) {
    return std::abs(actual - expected) / std::abs(expected);
}

// Fixed-seed generator for property tests.
inline std::mt19937_64 make_rng(std::uint64_t seed = 20261016) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace tunnelkit::test
