#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace wrg {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream seed for replica / scale-point index `stream` under a base seed.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream) {
    std::uint64_t s = base_seed;
    const std::uint64_t h = splitmix64(s);
    s = h ^ (0x632be59bd9b4e019ULL * (stream + 1));
    return splitmix64(s);
}

/// Deterministic random source. The engine is mt19937_64 (algorithm pinned by
/// the standard) and every variate is derived from raw 64-bit draws by fixed
/// arithmetic, so identical seeds give identical streams on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        // splitmix64 spreads nearby user seeds across the engine state space.
        engine_.seed(splitmix64(s));
        for (int i = 0; i < 8; ++i) engine_();
    }

    /// Independent stream for a replica / scale point.
    static Rng derive(std::uint64_t base_seed, std::uint64_t stream) {
        return Rng(derive_seed(base_seed, stream));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Exponential waiting time; requires rate > 0.
    double exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("Rng::exponential: rate must be > 0");
        return -std::log1p(-uniform01()) / rate;
    }

    /// Unbiased integer in [0, n) by rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::uniform_index: n must be > 0");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Poisson count by unit-rate arrival counting; exact for any mean >= 0.
    int poisson(double mean) {
        if (!(mean >= 0.0)) throw std::invalid_argument("Rng::poisson: mean must be >= 0");
        int k = 0;
        double t = exponential(1.0);
        while (t <= mean) {
            ++k;
            t += exponential(1.0);
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace wrg
