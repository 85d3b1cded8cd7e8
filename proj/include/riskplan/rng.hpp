#pragma once

// Seeded randomness helpers. The engine (std::mt19937_64) has a
// standardized output sequence; the distributions here are hand-rolled
// because std::*_distribution algorithms are implementation-defined and
// would break byte-reproducibility of seeded artifacts across toolchains.

#include <cmath>
#include <cstdint>
#include <random>

namespace riskplan {

// One SplitMix64 scramble step.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives an independent substream seed from a master seed and up to two
// indices (iteration, member, ...). Used wherever a run needs several
// decoupled random streams that stay reproducible.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(mix_seed(master) ^ mix_seed(a)) ^ mix_seed(b));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [lo, hi], inclusive. Lemire multiply-shift with
    // rejection, unbiased for any span.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
        std::uint64_t x = engine_();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * span;
        auto lot = static_cast<std::uint64_t>(m);
        if (lot < span) {
            const std::uint64_t threshold = -span % span;
            while (lot < threshold) {
                x = engine_();
                m = static_cast<unsigned __int128>(x) * span;
                lot = static_cast<std::uint64_t>(m);
            }
        }
        return lo + static_cast<std::int64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace riskplan
