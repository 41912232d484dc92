#pragma once

#include <cstdint>

namespace treefpp {

// Seed expander used to initialize the main generator state.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256** by Blackman and Vigna; fast, seedable, and good enough for
// Monte Carlo sampling. Not cryptographic.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Unbiased integer in [0, bound) via Lemire's method.
    uint64_t below(uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        uint64_t low = static_cast<uint64_t>(m);
        if (low < bound) {
            const uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    bool coin() { return next() >> 63; }

    double unit() { return (next() >> 11) * 0x1.0p-53; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

// Stream for one Monte Carlo sample, derived from the root seed and the
// sample's global index. Workers pick up disjoint index ranges, so results
// do not depend on the worker count.
inline Rng sample_stream(uint64_t root_seed, uint64_t sample_index) {
    SplitMix64 sm(root_seed ^ (0x9e3779b97f4a7c15ULL * (sample_index + 1)));
    return Rng(sm.next());
}

}  // namespace treefpp
