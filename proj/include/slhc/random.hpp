#pragma once

#include <cstdint>
#include <random>

namespace slhc {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-trial seed: master XOR a hash of (grid index, trial index). Any trial
/// can be rerun in isolation from these three numbers.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t grid_index,
                                           std::uint64_t trial_index) noexcept {
    return master ^ splitmix64(splitmix64(grid_index) ^ (trial_index + 0x632be59bd9b4e019ULL));
}

}  // namespace slhc
