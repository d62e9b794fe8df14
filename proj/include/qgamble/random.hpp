#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace qgamble {

/// SplitMix64 stream. Bit-exact on every platform, cheap to construct, and
/// keyed by (seed, index) so round i always sees the same randomness no
/// matter which worker runs it.
class RandomStream {
  public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static RandomStream for_round(std::uint64_t seed, std::uint64_t index) noexcept {
        return RandomStream(mix(seed ^ mix(index + 0xD1B54A32D192ED03ULL)));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept {
        // reject the short top slice so every residue is equally likely
        const std::uint64_t threshold = (0 - n) % n;
        std::uint64_t x = (*this)();
        while (x < threshold) {
            x = (*this)();
        }
        return x % n;
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Standard normal via Box-Muller (one value per call).
    double normal() noexcept {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace qgamble
