#pragma once

#include <cmath>
#include <cstdint>

#include "railcg/types.hpp"

namespace railcg {

// splitmix64 step; the constants are the ones from Steele et al.'s SplitMix.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Replication k of master seed s draws from the stream seeded with the
// (k+1)-th splitmix64 output of s. Documented so reports are reproducible
// across platforms.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= index; ++i) out = splitmix64(s);
    return out;
}

// Self-contained generator: std::mt19937_64 streams are portable, but the
// standard distributions are not, so sampling is done by hand here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    // Exponential with the given rate, by inversion.
    double next_exponential(double rate) {
        double u = next_double();
        return -std::log1p(-u) / rate;
    }

private:
    std::uint64_t state_;
};

}  // namespace railcg
