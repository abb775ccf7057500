#pragma once

// Portable deterministic randomness. std::mt19937_64 is bit-exact across
// standard libraries; the distributions in <random> are not, so bounded and
// Gaussian draws are done here.

#include <cstdint>
#include <random>

namespace qclat {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed derived from a key and a tuple of counters (order-independent streams).
inline std::uint64_t derive_seed(std::uint64_t key, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) noexcept
{
    return splitmix64(splitmix64(splitmix64(splitmix64(key) ^ a) ^ b) ^ c);
}

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// Uniform double in (0, 1).
inline double uniform_open01(std::mt19937_64& rng)
{
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Box-Muller standard normal; each call consumes two 64-bit outputs.
double standard_normal(std::mt19937_64& rng);

} // namespace qclat
