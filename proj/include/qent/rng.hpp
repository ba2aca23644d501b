#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace qent {

// Counter-based 64-bit generator (SplitMix64 finalizer applied to
// seed + (k+1)*GOLDEN). Output k depends only on (seed, k), so streams can
// be replayed, split, and reduced in a fixed order; results are identical
// across platforms. Algorithm and test vectors: docs/rng.md.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t value_at(std::uint64_t seed, std::uint64_t counter) {
        std::uint64_t z = seed + (counter + 1) * golden;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return value_at(seed_, counter_++); }

    /// Uniform on [0, 1), 53 random bits.
    double next_uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a logarithm argument.
    double next_uniform_open() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Box-Muller pair of independent standard normals.
    std::pair<double, double> next_gaussian_pair() {
        const double u1 = next_uniform_open();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }
    void reset() noexcept { counter_ = 0; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace qent
