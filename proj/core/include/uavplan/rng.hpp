#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace uavplan {

// mt19937_64 has a standard-mandated output sequence; the conversions below
// avoid std::*_distribution so draws are identical across standard libraries.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a, 64 bit.
constexpr std::uint64_t hash_string(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

// Uniform index in [0, n); n must be > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

// Stream tags keep independent uses of one seed apart.
enum class Stream : std::uint64_t {
    population = 1,
    mobility = 2,
    kmeans = 3,
    crp = 4,
    elbow = 5,
    epoch = 6,
};

// Child seed for (tag, index) under a parent seed.
constexpr std::uint64_t substream_seed(std::uint64_t seed, Stream tag, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag) * 0x100000001b3ULL + index));
}

// seed_r = master XOR hash(r, scenario id)
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t rep,
                                         std::string_view scenario_id) {
    return master ^ splitmix64(hash_string(scenario_id) ^ splitmix64(rep));
}

}  // namespace uavplan
