#pragma once

#include <cstdint>
#include <random>

namespace ssarf {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent substreams from one seed.
[[nodiscard]] constexpr auto mix_seed(std::uint64_t x) noexcept -> std::uint64_t
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

// Seed for substream `stream` of `seed`. Distinct streams give unrelated sequences.
[[nodiscard]] constexpr auto derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept -> std::uint64_t
{
    return mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x632BE59BD9B4E019ULL));
}

// Uniform draw in [0, 1).
[[nodiscard]] inline auto uniform01(Rng& rng) -> double
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

[[nodiscard]] inline auto standard_normal(Rng& rng) -> double
{
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

} // namespace ssarf
