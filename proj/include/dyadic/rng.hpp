#pragma once

#include <cstdint>

namespace dyadic {

/// splitmix64 (Steele, Lea, Flood). All randomness in this project flows
/// through this generator so trajectories are reproducible from a seed.
/// Draw protocol, in order:
///   edge-flip step:  rectangle index, then side (0=left,1=right,2=top,3=bottom)
///   block step:      half-tiling index, then direction (0=left,1=right,2=top,3=bottom)
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Unbiased draw in [0, n) by modulo rejection: draw w, accept when
    /// w >= 2^64 mod n, return w mod n.
    std::uint64_t uniform(std::uint64_t n) {
        const std::uint64_t reject_below = (0 - n) % n;
        for (;;) {
            const std::uint64_t w = next();
            if (w >= reject_below) return w % n;
        }
    }
};

/// Independent per-chain streams derived from one master seed.
inline SplitMix64 chain_stream(std::uint64_t master_seed, std::uint64_t stream) {
    SplitMix64 g(master_seed ^ ((stream + 1) * 0x9e3779b97f4a7c15ull));
    g.next();
    return g;
}

}  // namespace dyadic
