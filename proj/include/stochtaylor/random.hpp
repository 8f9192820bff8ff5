#pragma once

#include <cstdint>
#include <random>

namespace stochtaylor {

using Rng = std::mt19937_64;

/** splitmix64 finalizer. */
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/** Independent generator for stream `stream` of a run seeded with `seed`. */
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(mix64(seed)), static_cast<std::uint32_t>(mix64(seed) >> 32),
                      static_cast<std::uint32_t>(mix64(stream ^ 0xd1b54a32d192ed03ULL)),
                      static_cast<std::uint32_t>(mix64(stream ^ 0xd1b54a32d192ed03ULL) >> 32)};
    return Rng(seq);
}

}  // namespace stochtaylor
