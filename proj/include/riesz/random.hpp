#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace riesz {

// Seeds are derived from a master seed by a counter-based rule so that any
// replica, particle or step can be regenerated independently:
//
//   derive_seed(s, k) = splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15)
//
// and multi-index keys are folded left to right.

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

template <typename... Indices>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t first, Indices... rest) noexcept {
    if constexpr (sizeof...(rest) == 0) {
        return derive_seed(seed, first);
    } else {
        return derive_seed(derive_seed(seed, first), static_cast<std::uint64_t>(rest)...);
    }
}

/// Uniform in (0, 1], 53 bits.
constexpr double unit_interval_open_left(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

/// Two independent standard normals from a single key (Box-Muller).
inline std::array<double, 2> gaussian_pair(std::uint64_t key) noexcept {
    const double u1 = unit_interval_open_left(splitmix64(key));
    const double u2 = unit_interval_open_left(splitmix64(key ^ 0xD1B54A32D192ED03ULL));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace riesz
