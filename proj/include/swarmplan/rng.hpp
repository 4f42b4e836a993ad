#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace swarmplan {

/// splitmix64 step; used for seed mixing so that substreams derived from
/// (seed, generation, slot) are decorrelated and reproducible.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Mix an arbitrary tag sequence into one substream seed.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t state = 0x6a09e667f3bcc908ULL;
    std::uint64_t out = 0;
    for (std::uint64_t p : parts) {
        state ^= p;
        out = splitmix64(state);
    }
    return out;
}

/// Deterministic RNG with hand-rolled transforms. std::*_distribution is
/// implementation-defined, so all draws go through fixed formulas here and
/// identical seeds give identical streams on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so trivially related seeds diverge immediately
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Unbiased integer in [0, n) via rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Box-Muller without spare caching; one value per two uniforms.
    double gaussian(double mean, double sigma) {
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace swarmplan
