#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

#include "qpac/errors.hpp"

namespace qpac {

// Splittable counter-seeded randomness. Every sampling site in the library
// derives an independent stream from (seed, domain, index) so results do not
// depend on evaluation order or worker count.
//
// Stream derivation: three chained SplitMix64 finalizer steps over
// seed, domain and index (see derive_stream below). The per-stream engine is
// xoshiro256** seeded by a SplitMix64 sequence. Both generators are fully
// specified here, so output is identical across platforms and compilers.

inline constexpr std::uint64_t splitmix64_step(std::uint64_t &state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Well-known stream domains, kept distinct so that e.g. the i-th sample draw
/// and the i-th shadow unitary never share a stream.
enum class StreamDomain : std::uint64_t {
    SampleDraw = 1,
    ShadowUnitary = 2,
    ShadowOutcome = 3,
    BornMeasure = 4,
    Trial = 5,
    MonteCarlo = 6,
    TaskBuild = 7,
};

inline constexpr std::uint64_t derive_stream(std::uint64_t seed, StreamDomain domain,
                                             std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64_step(s);
    s ^= static_cast<std::uint64_t>(domain) * 0xd1342543de82ef95ULL;
    std::uint64_t b = splitmix64_step(s);
    s ^= index * 0xaf251af3b0f025b5ULL;
    std::uint64_t c = splitmix64_step(s);
    return a ^ (b + 0x9e3779b97f4a7c15ULL * c);
}

/// xoshiro256** stream generator.
class RngStream {
  public:
    explicit RngStream(std::uint64_t stream_seed) {
        std::uint64_t s = stream_seed;
        for (auto &w : state_)
            w = splitmix64_step(s);
    }

    RngStream(std::uint64_t seed, StreamDomain domain, std::uint64_t index)
        : RngStream(derive_stream(seed, domain, index)) {}

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Unbiased (Lemire rejection).
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0)
            throw RangeError("uniform_index: n must be positive");
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    /// Standard normal via Box-Muller on the deterministic uniform stream.
    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 0.0)
            u1 = uniform01();
        const double u2 = uniform01();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    /// Sample an index from nonnegative weights (need not be normalized).
    std::size_t discrete(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights)
            total += w;
        if (!(total > 0.0))
            throw RangeError("discrete: weights must have positive total");
        const double u = uniform01() * total;
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            cum += weights[i];
            if (u < cum)
                return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
};

/// Pairwise (cascade) summation over the index order. Deterministic for a
/// fixed input order regardless of how the values were produced.
inline double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0)
        return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

} // namespace qpac
