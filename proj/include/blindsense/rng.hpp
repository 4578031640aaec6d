#pragma once

// Seedable, portable random streams.
//
// std::mt19937_64 produces a bit-identical sequence on every conforming
// implementation, but the standard <random> distributions do not.  All
// variate generation is therefore done here explicitly: a 53-bit uniform
// conversion plus Box-Muller for normals.  Sub-streams are derived from a
// master seed with splitmix64 so that independent trials never share state.

#include <cmath>
#include <cstdint>
#include <random>

namespace blindsense {

// splitmix64 step; used both as a seed mixer and a stream deriver.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Engine for stream `stream` of master seed `seed`.  Distinct (seed, stream)
// pairs give statistically independent, reproducible sequences.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    s ^= 0xa0761d6478bd642fULL * (stream + 1);
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

// Uniform on [0, 1): top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1]; safe as a log() argument.
inline double uniform01_pos(std::mt19937_64& g) {
    return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

// Standard normal via Box-Muller (cosine branch).  Two draws per variate;
// no state is cached, so interleaving with other draws stays reproducible.
inline double normal(std::mt19937_64& g) {
    const double u = uniform01_pos(g);
    const double v = uniform01(g);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
}

} // namespace blindsense
