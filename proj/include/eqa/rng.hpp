#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace eqa {

// Seed mixing and the distribution transforms are hand-rolled so that streams
// are bit-identical across standard library implementations; std::mt19937_64
// itself is fully specified, the std::*_distribution adaptors are not.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derive an independent stream seed from a base seed and a stream tag.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream));
}
inline uint64_t derive_seed(uint64_t base, std::string_view tag) {
    return derive_seed(base, fnv1a64(tag));
}

class Rng {
public:
    explicit Rng(uint64_t seed = 0) : engine_(splitmix64(seed)) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        uint64_t n = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>((static_cast<__uint128_t>(engine_()) * n) >> 64);
    }

    // Standard normal via Box-Muller. One draw per call; the sine half is
    // discarded so each call consumes exactly two engine words.
    double normal() {
        double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTau * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static constexpr double kTau = 6.283185307179586476925286766559;
    std::mt19937_64 engine_;
};

}  // namespace eqa
