#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "pandora/rational.hpp"

namespace pandora {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent substream seed from a master seed and a tag path.
// Every consumer of randomness in the project goes through this, so any
// outcome can be replayed from (master seed, tags).
inline std::uint64_t mix_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = master ^ 0x6a09e667f3bcc908ULL;
    splitmix64(s);
    for (std::uint64_t t : tags) {
        s ^= t + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        splitmix64(s);
    }
    return splitmix64(s);
}

// Deterministic RNG stream. Uniform draws are hand-rolled on top of the
// (fully specified) mt19937_64 core so outputs are identical across
// standard libraries; std::uniform_*_distribution is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double unit() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // Same draw as an exact dyadic rational, for exact comparisons against
    // rational probabilities.
    Rat unit_rat() {
        Rat q(static_cast<unsigned long>(u64() >> 11), 1UL);
        q /= Rat(9007199254740992.0);  // 2^53
        return q;
    }

    // Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = u64();
        } while (x >= limit);
        return x % n;
    }

    // Uniform integer in [lo, hi] inclusive.
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace pandora
