#pragma once

#include <cstdint>
#include <random>

namespace aisr {

// Seeded generator with hand-rolled distributions. The std:: distributions are
// implementation-defined, so using them would make traces differ between
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(engine_());
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool operator==(const Rng&) const = default;

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer; derives independent stream seeds from one base seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream identifiers for mix_seed.
enum class SeedStream : std::uint64_t { Deployment = 0, Evaluation = 1, Pool = 2, Planner = 3 };

constexpr std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream) {
    return mix_seed(seed, static_cast<std::uint64_t>(stream));
}

} // namespace aisr
