#pragma once

#include <cstdint>

#include "hsp/scalar.hpp"

namespace hsp {

// splitmix64: portable, seedable, trivially splittable into per-trial
// streams. Reported in run records as generator "splitmix64".
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection, bias-free and platform-independent.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    // Derive an independent stream for one trial of a batch.
    static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial) {
        SplitMix64 mixer(seed ^ (0xd1342543de82ef95ULL * (trial + 1)));
        return SplitMix64(mixer.next());
    }

private:
    std::uint64_t state_;
};

// Bernoulli draw with success probability p in [0,1]. Exact mode compares
// the 64-bit draw against p * 2^64 in rational arithmetic, so no rounding
// enters the outcome.
template <class S>
bool bernoulli(SplitMix64& rng, const S& p) {
    const std::uint64_t u = rng.next();
    if constexpr (ScalarTraits<S>::exact) {
        return Rational(u) < p * Rational(BigInt(1) << 64);
    } else {
        return static_cast<double>(u) < p * 18446744073709551616.0;
    }
}

}  // namespace hsp
