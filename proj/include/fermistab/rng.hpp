#pragma once

#include <cstdint>
#include <random>

namespace fermistab {

// splitmix64; used to derive independent, reproducible seeds for
// per-(seed, block) Mersenne Twister streams.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic stream for a given (seed, stream_index). Thread scheduling
// never touches the mapping, so sampling is reproducible for any thread count.
inline std::mt19937_64 make_stream(uint64_t seed, uint64_t stream_index) {
    uint64_t s = seed;
    uint64_t a = splitmix64(s);
    s = a ^ (stream_index * 0xD2B74407B1CE6E93ull + 0x9E3779B97F4A7C15ull);
    uint64_t b = splitmix64(s);
    std::seed_seq seq{uint32_t(a), uint32_t(a >> 32), uint32_t(b), uint32_t(b >> 32),
                      uint32_t(stream_index), uint32_t(stream_index >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace fermistab
