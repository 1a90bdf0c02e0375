#pragma once

/// @file random.hpp
/// @brief Seedable random stream and the seed-splitting scheme shared by every
/// stochastic component.
///
/// All randomness flows from 64-bit seeds. A child stream is obtained with
/// derive_seed(parent, tag), which mixes the parent seed and a tag through two
/// rounds of SplitMix64:
///
///     derive_seed(p, t) = splitmix64(p ^ splitmix64(t + 0x9E3779B97F4A7C15))
///
/// Instance generation, walk campaigns and EA runs each draw from their own
/// child seeds, so results never depend on scheduling or worker count.
/// Uniform draws are implemented here rather than with <random> distributions
/// so that streams are identical across standard library implementations.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace epiroad {

/// One SplitMix64 output step applied to `x`.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept {
    return splitmix64(parent ^ splitmix64(tag + 0x9E3779B97F4A7C15ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::initializer_list<std::uint64_t> path) noexcept {
    for (auto tag : path) parent = derive_seed(parent, tag);
    return parent;
}

/// Stream tags used when splitting an instance seed into work streams.
enum class Stream : std::uint64_t {
    instance = 1,
    random_walk = 2,
    adaptive_walk = 3,
    neutrality = 4,
    evolution = 5,
    bitflip_walk = 6,
};

constexpr std::uint64_t derive_seed(std::uint64_t parent, Stream s) noexcept {
    return derive_seed(parent, static_cast<std::uint64_t>(s));
}

/// Mersenne Twister (mt19937_64) stream with portable uniform draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). `bound` must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection on the top of the range keeps the draw exactly uniform.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do { x = engine_(); } while (x >= limit);
        return x % bound;
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace epiroad
