// Seed derivation and portable uniform draws.
//
// Every stochastic object (a multi-start initial bump, a random test field) is addressed by
// (seed, index). derive_seed mixes the pair with SplitMix64, so point i of a sweep or start i of
// a multi-start run is reproducible on its own, independent of scheduling.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fracground {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL)); }

/// SplitMix64 stream; uniform() uses the top 53 bits, so draws are identical on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64(state_ - 0x9E3779B97F4A7C15ULL);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal by Box-Muller.
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::uint64_t state_;
};

}  // namespace fracground
