#pragma once

#include <cstdint>
#include <random>

namespace jlvol {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed and an index so that results never depend on evaluation order.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for stream `index` of a run with master seed `seed`:
/// splitmix64(seed + index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(seed + index);
}

using Rng = std::mt19937_64;

}  // namespace jlvol
