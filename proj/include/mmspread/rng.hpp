#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mmspread {

// Counter-based stream built on the splitmix64 finalizer: draw k of stream
// `seed` is mix(seed + (k+1) * golden-gamma). Any draw is addressable by
// index alone, so replay and truncation reproduce bit-exactly regardless of
// evaluation order. Identifier recorded in report metadata.
inline constexpr const char* kRngAlgorithm = "splitmix64-counter/box-muller v1";

struct CounterRng {
    std::uint64_t seed = 0;

    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t bits(std::uint64_t index) const {
        return mix(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
    }

    // Uniform on the open interval (0, 1); never 0, so logs are safe.
    double uniform(std::uint64_t index) const {
        return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes draws `index` and `index+1`.
    double normal(std::uint64_t index) const {
        double u1 = uniform(index);
        double u2 = uniform(index + 1);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }
};

}  // namespace mmspread
